/** Market-day panel: short-horizon forecast with the recommended day marked. */

import type { ForecastPayload, MarketDayRecord } from "../api.js";
import { clear, el, fmt, fmtSigned } from "../dom.js";

export interface MarketDayViewProps {
  forecast: ForecastPayload | null;
  marketDay: MarketDayRecord | null;
  error: Error | null;
  loading: boolean;
  onRetry?: () => void;
}

interface DayRow {
  date: string;
  predicted: number;
  actual: number | null;
}

function renderDayTable(container: HTMLElement, rows: DayRow[], recommended: string | null, withActuals: boolean): void {
  const table = el("table", "forecast-table");
  const head = el("thead");
  const headRow = el("tr");
  headRow.appendChild(el("th", undefined, "date"));
  headRow.appendChild(el("th", undefined, "predicted"));
  if (withActuals) headRow.appendChild(el("th", undefined, "actual"));
  head.appendChild(headRow);
  table.appendChild(head);

  const body = el("tbody");
  for (const row of rows) {
    const tr = el("tr", "forecast-row");
    tr.dataset.date = row.date;
    if (row.date === recommended) {
      tr.classList.add("recommended");
      tr.appendChild(el("td", "day-cell", `★ ${row.date}`));
    } else {
      tr.appendChild(el("td", "day-cell", row.date));
    }
    tr.appendChild(el("td", undefined, fmt(row.predicted)));
    if (withActuals) tr.appendChild(el("td", undefined, fmt(row.actual)));
    body.appendChild(tr);
  }
  table.appendChild(body);
  container.appendChild(table);
}

function renderRecorded(container: HTMLElement, record: MarketDayRecord): void {
  const actualByDate = new Map(record.actuals.map((a) => [a.date, a.actual]));
  const rows: DayRow[] = record.forecasts.map((f) => ({
    date: f.date,
    predicted: f.predicted,
    actual: actualByDate.get(f.date) ?? null,
  }));
  renderDayTable(container, rows, record.recommended_date, true);

  const prim = record.prim;
  const summary = el("div", "prim-summary");
  summary.appendChild(el(
    "p",
    undefined,
    `recommended ${prim.recommended_date}: realized ${fmt(prim.realized)} ` +
      `against a window average of ${fmt(prim.benchmark)}`,
  ));
  const gain = el(
    "span",
    prim.gain > 0 ? "badge gain-badge gain-positive" : "badge gain-badge gain-negative",
    fmtSigned(prim.gain),
  );
  summary.appendChild(gain);
  summary.appendChild(el(
    "span",
    "verdict",
    prim.success ? "beat the window average" : "did not beat the window average",
  ));
  container.appendChild(summary);
}

function renderLive(container: HTMLElement, forecast: ForecastPayload): void {
  const rows: DayRow[] = forecast.forecasts.map((f) => ({
    date: f.date,
    predicted: f.predicted,
    actual: null,
  }));
  renderDayTable(container, rows, forecast.recommended_date, false);
  if (forecast.recommended_date) {
    container.appendChild(el(
      "p",
      "recommend-note",
      `take produce to market on ${forecast.recommended_date}`,
    ));
  }
}

export function renderMarketDayView(container: HTMLElement, props: MarketDayViewProps): void {
  clear(container);
  container.appendChild(el("h2", undefined, "market-day forecast"));

  if (props.loading) {
    container.appendChild(el("p", "loading", "loading..."));
    return;
  }
  if (props.error) {
    const panel = el("div", "error-panel");
    panel.appendChild(el("p", "error-message", props.error.message));
    if (props.onRetry) {
      const button = el("button", "retry", "retry");
      button.addEventListener("click", props.onRetry);
      panel.appendChild(button);
    }
    container.appendChild(panel);
    return;
  }
  if (props.marketDay) {
    renderRecorded(container, props.marketDay);
    return;
  }
  if (props.forecast) {
    renderLive(container, props.forecast);
    return;
  }
  container.appendChild(el("p", "placeholder", "pick a series to forecast the next market days"));
}
