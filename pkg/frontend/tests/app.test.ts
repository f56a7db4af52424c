import { beforeEach, describe, expect, it } from "vitest";

import {
  ApiClient,
  FixtureTransport,
  type QueryParams,
  type Transport,
} from "../src/api.js";
import { createApp, type App } from "../src/app.js";
import marketsFixture from "../public/fixtures/markets.json";
import commoditiesFixture from "../public/fixtures/commodities_satara.json";
import intervalsFixture from "../public/fixtures/intervals_satara_tomato.json";
import emptyIntervalsFixture from "../public/fixtures/intervals_solapur_coriander.json";
import rankingFixture from "../public/fixtures/ranking_satara_tomato.json";
import insufficientYearsFixture from "../public/fixtures/error_insufficient_years.json";
import adviseJulyFixture from "../public/fixtures/advise_july.json";
import adviseJuneFixture from "../public/fixtures/advise_june.json";
import forecastFixture from "../public/fixtures/forecast_solapur.json";
import gapFixture from "../public/fixtures/error_gap.json";

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function recordedTransport(): FixtureTransport {
  const satara = (query: QueryParams): boolean => query.market === "Satara";
  return new FixtureTransport({
    "/v1/markets": marketsFixture,
    "/v1/commodities": (query: QueryParams) =>
      satara(query)
        ? commoditiesFixture
        : { market: "Solapur", commodities: ["coriander"], metadata: {} },
    "/v1/intervals": (query: QueryParams) => (satara(query) ? intervalsFixture : emptyIntervalsFixture),
    "/v1/ranking": (query: QueryParams) => (satara(query) ? rankingFixture : insufficientYearsFixture),
    "/v1/advise": (_query: QueryParams, body: unknown) => {
      const period = (body as { current_period?: string }).current_period;
      if (period === "July") return adviseJulyFixture;
      if (period === "June") return adviseJuneFixture;
      return { error: { status: 404, code: "not_found", message: "period not recorded" } };
    },
    "/v1/forecast": (query: QueryParams) => (query.market === "Solapur" ? forecastFixture : gapFixture),
  });
}

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
});

async function bootApp(transport: Transport = recordedTransport()): Promise<App> {
  const app = createApp(root, new ApiClient(transport));
  await flush();
  return app;
}

describe("selection flow over recorded payloads", () => {
  it("fills the market selector on boot", async () => {
    await bootApp();
    const options = Array.from(
      root.querySelectorAll<HTMLOptionElement>("#market-select option"),
    ).map((o) => o.value);
    expect(options).toEqual(["", "Satara", "Solapur"]);
  });

  it("renders twelve glyphs with the top rank marked after picking a series", async () => {
    const app = await bootApp();
    await app.selectMarket("Satara");
    await app.selectCommodity("tomato");
    expect(root.querySelectorAll(".interval-glyph")).toHaveLength(12);
    const top = root.querySelector(".interval-glyph.top-ranked") as SVGElement;
    expect(top.dataset.period).toBe("July");
    const firstRow = root.querySelector(".ranking-row") as HTMLElement;
    expect(firstRow.dataset.period).toBe("July");
    expect(firstRow.dataset.rank).toBe("1");
  });

  it("advises stay for the top-ranked period and waiting otherwise", async () => {
    const app = await bootApp();
    await app.selectMarket("Satara");
    await app.selectCommodity("tomato");

    await app.selectPeriod("June");
    const panel = root.querySelector("#advice-panel")!;
    expect(panel.querySelector(".wait-badge")).not.toBeNull();
    const first = panel.querySelector(".suggestion") as HTMLButtonElement;
    expect(first.dataset.period).toBe("July");

    first.click();
    await flush();
    expect(panel.querySelector(".stay-badge")).not.toBeNull();
    expect(panel.textContent).toContain("July is rank 1");
  });

  it("shows the gap failure in the market-day panel without touching the seasonal view", async () => {
    const app = await bootApp();
    await app.selectMarket("Satara");
    await app.selectCommodity("tomato");
    const marketDayPanel = root.querySelector("#market-day-panel")!;
    expect(marketDayPanel.querySelector(".error-panel")!.textContent).toContain("gap");
    expect(root.querySelectorAll(".interval-glyph")).toHaveLength(12);
  });

  it("shows the empty state for a series with too little seasonal history", async () => {
    const app = await bootApp();
    await app.selectMarket("Solapur");
    await app.selectCommodity("coriander");
    const seasonal = root.querySelector("#seasonal-panel")!;
    expect(seasonal.querySelector(".empty-state")).not.toBeNull();
    expect(seasonal.querySelector(".error-panel")).toBeNull();
    const marked = root.querySelector(".forecast-row.recommended") as HTMLElement;
    expect(marked.dataset.date).toBe("2021-06-29");
  });

  it("clears advice when the commodity changes", async () => {
    const app = await bootApp();
    await app.selectMarket("Satara");
    await app.selectCommodity("tomato");
    await app.selectPeriod("July");
    expect(app.store.get().advice).not.toBeNull();
    await app.selectMarket("Solapur");
    expect(app.store.get().advice).toBeNull();
    expect(root.querySelector("#advice-panel .placeholder")).not.toBeNull();
  });
});

interface PendingCall {
  path: string;
  query: QueryParams;
  body: unknown;
  resolve: (value: unknown) => void;
  reject: (reason: unknown) => void;
}

class ManualTransport implements Transport {
  calls: PendingCall[] = [];

  private pend(path: string, query: QueryParams, body: unknown): Promise<unknown> {
    return new Promise((resolve, reject) => {
      this.calls.push({ path, query, body, resolve, reject });
    });
  }

  get(path: string, query: QueryParams): Promise<unknown> {
    return this.pend(path, query, undefined);
  }

  post(path: string, body: unknown): Promise<unknown> {
    return this.pend(path, {}, body);
  }
}

describe("stale responses", () => {
  it("keeps the newest advice when an older request resolves late", async () => {
    const transport = new ManualTransport();
    const app = createApp(root, new ApiClient(transport));
    app.store.update({ market: "Satara", commodity: "tomato" });

    void app.selectPeriod("June");
    void app.selectPeriod("July");
    const adviseCalls = transport.calls.filter((c) => c.path === "/v1/advise");
    expect(adviseCalls).toHaveLength(2);
    const juneCall = adviseCalls.find(
      (c) => (c.body as { current_period: string }).current_period === "June",
    )!;
    const julyCall = adviseCalls.find(
      (c) => (c.body as { current_period: string }).current_period === "July",
    )!;

    julyCall.resolve(adviseJulyFixture);
    await flush();
    juneCall.resolve(adviseJuneFixture);
    await flush();

    expect(app.store.get().advice!.current_period).toBe("July");
    const panel = root.querySelector("#advice-panel")!;
    expect(panel.querySelector(".stay-badge")).not.toBeNull();
    expect(panel.querySelector(".wait-badge")).toBeNull();
  });

  it("drops a late seasonal payload after the selection moved on", async () => {
    const transport = new ManualTransport();
    const app = createApp(root, new ApiClient(transport));
    app.store.update({ market: "Satara", commodity: "tomato" });

    void app.refreshSeasonal();
    app.store.update({ market: "Solapur", commodity: "coriander" });
    void app.refreshSeasonal();

    const intervalCalls = transport.calls.filter((c) => c.path === "/v1/intervals");
    expect(intervalCalls).toHaveLength(2);
    intervalCalls[1]!.resolve(emptyIntervalsFixture);
    await flush();
    intervalCalls[0]!.resolve(intervalsFixture);
    await flush();

    expect(app.store.get().intervals!.intervals).toHaveLength(0);
    expect(root.querySelector("#seasonal-panel .empty-state")).not.toBeNull();
  });
});
