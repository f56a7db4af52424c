/** Seasonal panel: interval glyphs per period plus the ranking table. */

import type { IntervalsPayload, RankingPayload } from "../api.js";
import { clear, el, fmt, shortPeriod, svgEl } from "../dom.js";

export interface IntervalsViewProps {
  intervals: IntervalsPayload | null;
  ranking: RankingPayload | null;
  error: Error | null;
  loading: boolean;
  onRetry?: () => void;
}

const WIDTH_PER_GLYPH = 56;
const MARGIN = { top: 16, bottom: 28, left: 8, right: 8 };
const PLOT_HEIGHT = 180;

function renderGlyphs(container: HTMLElement, payload: IntervalsPayload, ranking: RankingPayload | null): void {
  const entries = payload.intervals;
  const ranks = new Map<string, number>();
  if (ranking) {
    for (const row of ranking.ranking) ranks.set(row.period, row.rank);
  }

  const lows = entries.map((e) => e.lower);
  const highs = entries.map((e) => e.upper);
  const lo = Math.min(...lows);
  const hi = Math.max(...highs);
  const span = hi - lo || 1;
  const y = (value: number): number =>
    MARGIN.top + ((hi - value) / span) * PLOT_HEIGHT;

  const width = MARGIN.left + MARGIN.right + entries.length * WIDTH_PER_GLYPH;
  const height = MARGIN.top + MARGIN.bottom + PLOT_HEIGHT;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
    role: "img",
  });
  svg.classList.add("interval-chart");

  entries.forEach((entry, i) => {
    const x = MARGIN.left + i * WIDTH_PER_GLYPH + WIDTH_PER_GLYPH / 2;
    const group = svgEl("g", {});
    group.classList.add("interval-glyph");
    if (ranks.get(entry.period) === 1) group.classList.add("top-ranked");
    group.dataset.period = entry.period;

    group.appendChild(svgEl("line", {
      x1: x, x2: x, y1: y(entry.lower), y2: y(entry.upper), class: "ci-bar",
    }));
    group.appendChild(svgEl("line", {
      x1: x - 8, x2: x + 8, y1: y(entry.upper), y2: y(entry.upper), class: "ci-cap",
    }));
    group.appendChild(svgEl("line", {
      x1: x - 8, x2: x + 8, y1: y(entry.lower), y2: y(entry.lower), class: "ci-cap",
    }));
    group.appendChild(svgEl("circle", {
      cx: x, cy: y(entry.mean), r: 4, class: "mean-dot",
    }));

    const label = svgEl("text", {
      x, y: height - 8, "text-anchor": "middle", class: "period-label",
    });
    label.textContent = shortPeriod(entry.period);
    group.appendChild(label);

    const title = svgEl("title", {});
    title.textContent =
      `${entry.period}: mean ${fmt(entry.mean)}, ` +
      `interval [${fmt(entry.lower)}, ${fmt(entry.upper)}]`;
    group.appendChild(title);

    svg.appendChild(group);
  });

  const wrap = el("div", "chart-scroll");
  wrap.appendChild(svg);
  container.appendChild(wrap);
}

function renderRankingTable(container: HTMLElement, ranking: RankingPayload): void {
  const table = el("table", "ranking-table");
  const head = el("thead");
  const headRow = el("tr");
  for (const column of ["rank", "period", "flap", "mean", "interval"]) {
    headRow.appendChild(el("th", undefined, column));
  }
  head.appendChild(headRow);
  table.appendChild(head);

  const body = el("tbody");
  for (const row of ranking.ranking) {
    const tr = el("tr", "ranking-row");
    tr.dataset.period = row.period;
    tr.dataset.rank = String(row.rank);
    tr.appendChild(el("td", undefined, String(row.rank)));
    tr.appendChild(el("td", undefined, row.period));
    tr.appendChild(el("td", undefined, fmt(row.flap)));
    tr.appendChild(el("td", undefined, fmt(row.mean)));
    tr.appendChild(el("td", undefined, `[${fmt(row.lower)}, ${fmt(row.upper)}]`));
    body.appendChild(tr);
  }
  table.appendChild(body);
  container.appendChild(table);
}

function renderDominance(container: HTMLElement, ranking: RankingPayload): void {
  const details = el("details", "dominance");
  details.appendChild(el("summary", undefined, `dominance relations (${ranking.dominance.length})`));
  const list = el("ul");
  for (const edge of ranking.dominance) {
    list.appendChild(el(
      "li",
      "dominance-edge",
      `${edge.winner} over ${edge.loser} (rule ${edge.rule})`,
    ));
  }
  details.appendChild(list);
  container.appendChild(details);
}

function renderError(container: HTMLElement, error: Error, onRetry?: () => void): void {
  const panel = el("div", "error-panel");
  panel.appendChild(el("p", "error-message", error.message));
  if (onRetry) {
    const button = el("button", "retry", "retry");
    button.addEventListener("click", onRetry);
    panel.appendChild(button);
  }
  container.appendChild(panel);
}

export function renderIntervalsView(container: HTMLElement, props: IntervalsViewProps): void {
  clear(container);
  container.appendChild(el("h2", undefined, "seasonal price intervals"));

  if (props.loading) {
    container.appendChild(el("p", "loading", "loading..."));
    return;
  }
  if (props.error) {
    renderError(container, props.error, props.onRetry);
    return;
  }
  if (!props.intervals) {
    container.appendChild(el("p", "placeholder", "choose a market and commodity"));
    return;
  }
  if (props.intervals.intervals.length === 0) {
    container.appendChild(el(
      "p",
      "empty-state",
      "not enough history: no period has two or more years with data",
    ));
    return;
  }

  renderGlyphs(container, props.intervals, props.ranking);
  if (props.ranking) {
    renderRankingTable(container, props.ranking);
    renderDominance(container, props.ranking);
  }
}
