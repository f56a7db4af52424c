/** Session state and staleness guard for in-flight requests. */

import type {
  AdvicePayload,
  ForecastPayload,
  IntervalsPayload,
  MarketDayRecord,
  RankingPayload,
} from "./api.js";

export type Panel = "seasonal" | "advice" | "forecast";

export interface SessionState {
  markets: string[];
  commodities: string[];
  market: string | null;
  commodity: string | null;
  granularity: "month" | "week";
  currentPeriod: string | null;
  intervals: IntervalsPayload | null;
  ranking: RankingPayload | null;
  advice: AdvicePayload | null;
  forecast: ForecastPayload | null;
  marketDay: MarketDayRecord | null;
  errors: Partial<Record<Panel, Error>>;
  loading: Partial<Record<Panel, boolean>>;
}

export function initialState(): SessionState {
  return {
    markets: [],
    commodities: [],
    market: null,
    commodity: null,
    granularity: "month",
    currentPeriod: null,
    intervals: null,
    ranking: null,
    advice: null,
    forecast: null,
    marketDay: null,
    errors: {},
    loading: {},
  };
}

export type Listener = (state: SessionState) => void;

export class Store {
  private state: SessionState;
  private listeners: Listener[] = [];

  constructor(state: SessionState = initialState()) {
    this.state = state;
  }

  get(): SessionState {
    return this.state;
  }

  update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}

/**
 * Monotonic ticket counter per panel. A response only lands if its ticket
 * is still the newest one issued, so a slow reply from an earlier
 * selection can never overwrite a later one.
 */
export class RequestGate {
  private tickets: Partial<Record<Panel, number>> = {};
  private counter = 0;

  issue(panel: Panel): number {
    this.counter += 1;
    this.tickets[panel] = this.counter;
    return this.counter;
  }

  isCurrent(panel: Panel, ticket: number): boolean {
    return this.tickets[panel] === ticket;
  }
}
