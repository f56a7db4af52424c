/**
 * Entry point. By default the app talks to the service that served this
 * page. With ?demo=1 it replays recorded payloads instead, so the UI can
 * be exercised with no live backend.
 */

import {
  ApiClient,
  FixtureTransport,
  HttpTransport,
  type CommoditiesPayload,
  type MarketDayRecord,
  type QueryParams,
  type Transport,
} from "./api.js";
import { createApp } from "./app.js";
import { el } from "./dom.js";

async function loadFixture(name: string): Promise<unknown> {
  const response = await fetch(`fixtures/${name}.json`);
  if (!response.ok) throw new Error(`missing fixture ${name}`);
  return response.json();
}

async function buildDemoTransport(): Promise<Transport> {
  const [
    markets,
    commoditiesSatara,
    intervalsSatara,
    intervalsSolapur,
    ranking,
    errorInsufficientYears,
    adviseJuly,
    adviseJune,
    forecastSolapur,
    errorGap,
  ] = await Promise.all([
    loadFixture("markets"),
    loadFixture("commodities_satara"),
    loadFixture("intervals_satara_tomato"),
    loadFixture("intervals_solapur_coriander"),
    loadFixture("ranking_satara_tomato"),
    loadFixture("error_insufficient_years"),
    loadFixture("advise_july"),
    loadFixture("advise_june"),
    loadFixture("forecast_solapur"),
    loadFixture("error_gap"),
  ]);

  const satara = (query: QueryParams): boolean => query.market === "Satara";
  const commodities = commoditiesSatara as CommoditiesPayload;

  return new FixtureTransport({
    "/v1/markets": markets,
    "/v1/commodities": (query: QueryParams) =>
      satara(query)
        ? commodities
        : { market: "Solapur", commodities: ["coriander"], metadata: commodities.metadata },
    "/v1/intervals": (query: QueryParams) => (satara(query) ? intervalsSatara : intervalsSolapur),
    "/v1/ranking": (query: QueryParams) => (satara(query) ? ranking : errorInsufficientYears),
    "/v1/advise": (_query: QueryParams, body: unknown) => {
      const period = (body as { current_period?: string }).current_period;
      if (period === "July") return adviseJuly;
      if (period === "June") return adviseJune;
      return {
        error: {
          status: 404,
          code: "not_found",
          message: "demo mode only has recorded advice for June and July",
        },
      };
    },
    "/v1/forecast": (query: QueryParams) => (query.market === "Solapur" ? forecastSolapur : errorGap),
  });
}

function addEpisodeToggle(root: HTMLElement, store: { update(patch: object): void }): void {
  const footer = el("footer", "demo-footer");
  const button = el("button", "episode-toggle", "replay recorded market day (Solapur coriander)");
  let shown = false;
  let record: MarketDayRecord | null = null;
  button.addEventListener("click", () => {
    void (async () => {
      if (!record) record = (await loadFixture("market_day_solapur")) as MarketDayRecord;
      shown = !shown;
      store.update({ marketDay: shown ? record : null });
      button.textContent = shown
        ? "hide recorded market day"
        : "replay recorded market day (Solapur coriander)";
    })();
  });
  footer.appendChild(button);
  root.appendChild(footer);
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const demo = new URLSearchParams(window.location.search).get("demo") === "1";
  const transport = demo ? await buildDemoTransport() : new HttpTransport("");
  const app = createApp(root, new ApiClient(transport));
  if (demo) addEpisodeToggle(root, app.store);
}

void boot();
