/** Wires the selectors, the three panels, and the request lifecycle. */

import { ApiClient, type SeasonalQuery } from "./api.js";
import { clear, el } from "./dom.js";
import { RequestGate, Store, type Panel, type SessionState } from "./state.js";
import { renderAdvicePanel } from "./views/advicePanel.js";
import { renderIntervalsView } from "./views/intervalsView.js";
import { renderMarketDayView } from "./views/marketDayView.js";

export interface App {
  store: Store;
  selectMarket(market: string): Promise<void>;
  selectCommodity(commodity: string): Promise<void>;
  selectPeriod(period: string): Promise<void>;
  refreshSeasonal(): Promise<void>;
  refreshAdvice(): Promise<void>;
  refreshForecast(): Promise<void>;
}

function isAbort(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

function asError(err: unknown): Error {
  return err instanceof Error ? err : new Error(String(err));
}

function fillSelect(select: HTMLSelectElement, values: string[], current: string | null, placeholder: string): void {
  clear(select);
  const blank = el("option", undefined, placeholder);
  blank.setAttribute("value", "");
  select.appendChild(blank);
  for (const value of values) {
    const option = el("option", undefined, value);
    option.setAttribute("value", value);
    select.appendChild(option);
  }
  select.value = current ?? "";
}

export function createApp(root: HTMLElement, client: ApiClient): App {
  const store = new Store();
  const gate = new RequestGate();
  const controllers: Partial<Record<Panel, AbortController>> = {};

  clear(root);
  const header = el("header");
  header.appendChild(el("h1", undefined, "favorit advisor"));
  const selectors = el("div", "selectors");

  const marketSelect = el("select");
  marketSelect.id = "market-select";
  const commoditySelect = el("select");
  commoditySelect.id = "commodity-select";
  const periodSelect = el("select");
  periodSelect.id = "period-select";

  for (const [labelText, select] of [
    ["market", marketSelect],
    ["commodity", commoditySelect],
    ["current period", periodSelect],
  ] as const) {
    const label = el("label", "selector");
    label.appendChild(el("span", undefined, labelText));
    label.appendChild(select);
    selectors.appendChild(label);
  }
  header.appendChild(selectors);
  root.appendChild(header);

  const main = el("main");
  const seasonalEl = el("section", "panel");
  seasonalEl.id = "seasonal-panel";
  const adviceEl = el("section", "panel");
  adviceEl.id = "advice-panel";
  const marketDayEl = el("section", "panel");
  marketDayEl.id = "market-day-panel";
  main.appendChild(seasonalEl);
  main.appendChild(adviceEl);
  main.appendChild(marketDayEl);
  root.appendChild(main);

  function begin(panel: Panel): { ticket: number; signal: AbortSignal } {
    controllers[panel]?.abort();
    const controller = new AbortController();
    controllers[panel] = controller;
    return { ticket: gate.issue(panel), signal: controller.signal };
  }

  function setPanel(panel: Panel, patch: Partial<SessionState>, error?: Error): void {
    const s = store.get();
    store.update({
      ...patch,
      loading: { ...s.loading, [panel]: false },
      errors: { ...s.errors, [panel]: error },
    });
  }

  function markLoading(panel: Panel): void {
    const s = store.get();
    store.update({ loading: { ...s.loading, [panel]: true } });
  }

  function seasonalQuery(s: SessionState): SeasonalQuery | null {
    if (!s.market || !s.commodity) return null;
    return { market: s.market, commodity: s.commodity, granularity: s.granularity };
  }

  async function refreshSeasonal(): Promise<void> {
    const { ticket, signal } = begin("seasonal");
    const query = seasonalQuery(store.get());
    if (!query) {
      setPanel("seasonal", { intervals: null, ranking: null });
      return;
    }
    markLoading("seasonal");
    try {
      const intervals = await client.intervals(query, signal);
      const ranking = intervals.intervals.length > 0
        ? await client.ranking(query, signal)
        : null;
      if (!gate.isCurrent("seasonal", ticket)) return;
      setPanel("seasonal", { intervals, ranking });
    } catch (err) {
      if (!gate.isCurrent("seasonal", ticket) || isAbort(err)) return;
      setPanel("seasonal", { intervals: null, ranking: null }, asError(err));
    }
  }

  async function refreshAdvice(): Promise<void> {
    const { ticket, signal } = begin("advice");
    const s = store.get();
    const query = seasonalQuery(s);
    if (!query || !s.currentPeriod) {
      setPanel("advice", { advice: null });
      return;
    }
    markLoading("advice");
    try {
      const advice = await client.advise({ ...query, current_period: s.currentPeriod }, signal);
      if (!gate.isCurrent("advice", ticket)) return;
      setPanel("advice", { advice });
    } catch (err) {
      if (!gate.isCurrent("advice", ticket) || isAbort(err)) return;
      setPanel("advice", { advice: null }, asError(err));
    }
  }

  async function refreshForecast(): Promise<void> {
    const { ticket, signal } = begin("forecast");
    const s = store.get();
    if (!s.market || !s.commodity) {
      setPanel("forecast", { forecast: null });
      return;
    }
    markLoading("forecast");
    try {
      const forecast = await client.forecast({ market: s.market, commodity: s.commodity }, signal);
      if (!gate.isCurrent("forecast", ticket)) return;
      setPanel("forecast", { forecast });
    } catch (err) {
      if (!gate.isCurrent("forecast", ticket) || isAbort(err)) return;
      setPanel("forecast", { forecast: null }, asError(err));
    }
  }

  async function selectMarket(market: string): Promise<void> {
    store.update({
      market: market || null,
      commodity: null,
      commodities: [],
      currentPeriod: null,
      intervals: null,
      ranking: null,
      advice: null,
      forecast: null,
    });
    if (!market) return;
    try {
      const payload = await client.commodities(market);
      if (store.get().market !== market) return;
      store.update({ commodities: payload.commodities });
    } catch (err) {
      if (isAbort(err)) return;
      setPanel("seasonal", {}, asError(err));
    }
  }

  async function selectCommodity(commodity: string): Promise<void> {
    store.update({
      commodity: commodity || null,
      currentPeriod: null,
      intervals: null,
      ranking: null,
      advice: null,
      forecast: null,
    });
    if (!commodity) return;
    await Promise.all([refreshSeasonal(), refreshForecast()]);
  }

  async function selectPeriod(period: string): Promise<void> {
    store.update({ currentPeriod: period || null });
    await refreshAdvice();
  }

  marketSelect.addEventListener("change", () => {
    void selectMarket(marketSelect.value);
  });
  commoditySelect.addEventListener("change", () => {
    void selectCommodity(commoditySelect.value);
  });
  periodSelect.addEventListener("change", () => {
    void selectPeriod(periodSelect.value);
  });

  function render(s: SessionState): void {
    fillSelect(marketSelect, s.markets, s.market, "choose market");
    fillSelect(commoditySelect, s.commodities, s.commodity, "choose commodity");
    const periods = s.intervals ? s.intervals.intervals.map((e) => e.period) : [];
    fillSelect(periodSelect, periods, s.currentPeriod, "choose period");

    renderIntervalsView(seasonalEl, {
      intervals: s.intervals,
      ranking: s.ranking,
      error: s.errors.seasonal ?? null,
      loading: !!s.loading.seasonal,
      onRetry: () => void refreshSeasonal(),
    });
    renderAdvicePanel(adviceEl, {
      advice: s.advice,
      error: s.errors.advice ?? null,
      loading: !!s.loading.advice,
      onPick: (period) => void selectPeriod(period),
      onRetry: () => void refreshAdvice(),
    });
    renderMarketDayView(marketDayEl, {
      forecast: s.forecast,
      marketDay: s.marketDay,
      error: s.errors.forecast ?? null,
      loading: !!s.loading.forecast,
      onRetry: () => void refreshForecast(),
    });
  }

  store.subscribe(render);
  render(store.get());

  void client.markets().then(
    (payload) => store.update({ markets: payload.markets }),
    (err) => setPanel("seasonal", {}, asError(err)),
  );

  return {
    store,
    selectMarket,
    selectCommodity,
    selectPeriod,
    refreshSeasonal,
    refreshAdvice,
    refreshForecast,
  };
}
