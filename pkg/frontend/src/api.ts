/** Typed access to the advisor service JSON API. */

export interface Metadata {
  tool_version: string;
  seed?: number;
  dataset_version?: string;
  inputs: Record<string, unknown>;
}

export interface IntervalSummary {
  period: string;
  n_years: number;
  mean: number;
  sd: number;
  lower: number;
  upper: number;
  level: number;
  flap: number | null;
}

export interface IntervalsPayload {
  intervals: IntervalSummary[];
  metadata: Metadata;
}

export interface RankingEntry extends IntervalSummary {
  rank: number;
}

export interface DominanceEdge {
  winner: string;
  loser: string;
  rule: number;
}

export interface RankingPayload {
  ranking: RankingEntry[];
  dominance: DominanceEdge[];
  metadata: Metadata;
}

export interface BetterPeriod {
  period: string;
  rank: number;
  calendar_distance: number;
}

export interface AdvicePayload {
  current_period: string;
  current_rank: number;
  stay: boolean;
  better_periods: BetterPeriod[];
  metadata: Metadata;
}

export interface ForecastPoint {
  date: string;
  predicted: number;
}

export interface ForecastPayload {
  forecasts: ForecastPoint[];
  recommended_date: string | null;
  model: Record<string, unknown>;
  metadata: Metadata;
}

export interface ActualPoint {
  date: string;
  actual: number;
}

export interface PrimResult {
  window: string[];
  recommended_date: string;
  predicted_at_recommendation: number | null;
  realized: number;
  benchmark: number;
  gain: number;
  success: boolean;
}

/** Recorded market-day episode: forecasts plus the realized outcome. */
export interface MarketDayRecord {
  forecasts: ForecastPoint[];
  recommended_date: string;
  actuals: ActualPoint[];
  prim: PrimResult;
  metadata: Metadata;
}

export interface MarketsPayload {
  markets: string[];
  metadata: Metadata;
}

export interface CommoditiesPayload {
  market: string;
  commodities: string[];
  metadata: Metadata;
}

export interface SeasonalQuery {
  market: string;
  commodity: string;
  granularity: "month" | "week";
  window_start?: string;
  weeks?: number;
}

export interface AdviseRequest extends SeasonalQuery {
  current_period: string;
  max_distance?: number;
}

export interface ForecastQuery {
  market: string;
  commodity: string;
  end?: string;
  h?: number;
  fit_len?: number;
}

export class ApiError extends Error {
  status: number;
  code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

function errorFromBody(status: number, body: unknown): ApiError {
  if (typeof body === "object" && body !== null && "error" in body) {
    const e = (body as { error: { status?: number; code?: string; message?: string } }).error;
    return new ApiError(e.status ?? status, e.code ?? "error", e.message ?? "request failed");
  }
  return new ApiError(status, "error", `request failed with status ${status}`);
}

export type QueryParams = Record<string, string | number | undefined>;

export interface Transport {
  get(path: string, query: QueryParams, signal?: AbortSignal): Promise<unknown>;
  post(path: string, body: unknown, signal?: AbortSignal): Promise<unknown>;
}

function queryString(query: QueryParams): string {
  const pairs: string[] = [];
  for (const key of Object.keys(query).sort()) {
    const value = query[key];
    if (value === undefined) continue;
    pairs.push(`${encodeURIComponent(key)}=${encodeURIComponent(String(value))}`);
  }
  return pairs.length === 0 ? "" : `?${pairs.join("&")}`;
}

/** Talks to a live service over fetch. */
export class HttpTransport implements Transport {
  constructor(private base: string = "") {}

  private async send(url: string, init: RequestInit): Promise<unknown> {
    const response = await fetch(url, init);
    const body: unknown = await response.json().catch(() => null);
    if (!response.ok) throw errorFromBody(response.status, body);
    return body;
  }

  get(path: string, query: QueryParams, signal?: AbortSignal): Promise<unknown> {
    return this.send(`${this.base}${path}${queryString(query)}`, { signal: signal ?? null });
  }

  post(path: string, body: unknown, signal?: AbortSignal): Promise<unknown> {
    return this.send(`${this.base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal: signal ?? null,
    });
  }
}

export type FixtureHandler =
  | unknown
  | ((query: QueryParams, body: unknown) => unknown);

/**
 * Serves recorded payloads keyed by request path. A handler holding an
 * error body (an object with an "error" key) is thrown as ApiError, so
 * recorded failures replay exactly like live ones.
 */
export class FixtureTransport implements Transport {
  constructor(private routes: Record<string, FixtureHandler>) {}

  private resolve(path: string, query: QueryParams, body: unknown): Promise<unknown> {
    if (!(path in this.routes)) {
      return Promise.reject(new ApiError(404, "not_found", `no fixture for ${path}`));
    }
    const handler = this.routes[path];
    const payload = typeof handler === "function" ? handler(query, body) : handler;
    if (typeof payload === "object" && payload !== null && "error" in payload) {
      return Promise.reject(errorFromBody(0, payload));
    }
    return Promise.resolve(payload);
  }

  get(path: string, query: QueryParams): Promise<unknown> {
    return this.resolve(path, query, undefined);
  }

  post(path: string, body: unknown): Promise<unknown> {
    return this.resolve(path, {}, body);
  }
}

/** Thin typed wrapper over a transport. */
export class ApiClient {
  constructor(private transport: Transport) {}

  markets(signal?: AbortSignal): Promise<MarketsPayload> {
    return this.transport.get("/v1/markets", {}, signal) as Promise<MarketsPayload>;
  }

  commodities(market: string, signal?: AbortSignal): Promise<CommoditiesPayload> {
    return this.transport.get("/v1/commodities", { market }, signal) as Promise<CommoditiesPayload>;
  }

  intervals(query: SeasonalQuery, signal?: AbortSignal): Promise<IntervalsPayload> {
    return this.transport.get("/v1/intervals", { ...query }, signal) as Promise<IntervalsPayload>;
  }

  ranking(query: SeasonalQuery, signal?: AbortSignal): Promise<RankingPayload> {
    return this.transport.get("/v1/ranking", { ...query }, signal) as Promise<RankingPayload>;
  }

  advise(request: AdviseRequest, signal?: AbortSignal): Promise<AdvicePayload> {
    return this.transport.post("/v1/advise", request, signal) as Promise<AdvicePayload>;
  }

  forecast(query: ForecastQuery, signal?: AbortSignal): Promise<ForecastPayload> {
    return this.transport.get("/v1/forecast", { ...query }, signal) as Promise<ForecastPayload>;
  }
}
