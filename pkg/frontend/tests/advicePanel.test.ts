import { beforeEach, describe, expect, it, vi } from "vitest";

import type { AdvicePayload } from "../src/api.js";
import { renderAdvicePanel } from "../src/views/advicePanel.js";
import adviseJulyFixture from "../public/fixtures/advise_july.json";
import adviseJuneFixture from "../public/fixtures/advise_june.json";

const adviseJuly = adviseJulyFixture as unknown as AdvicePayload;
const adviseJune = adviseJuneFixture as unknown as AdvicePayload;

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  container = document.createElement("section");
  document.body.appendChild(container);
});

describe("stay verdict", () => {
  it("shows a stay badge for the top-ranked period and no suggestions", () => {
    renderAdvicePanel(container, { advice: adviseJuly, error: null, loading: false });
    const badge = container.querySelector(".stay-badge");
    expect(badge).not.toBeNull();
    expect(badge!.textContent).toBe("stay");
    expect(container.textContent).toContain("July is rank 1");
    expect(container.querySelectorAll(".suggestion")).toHaveLength(0);
  });
});

describe("wait verdict", () => {
  it("lists better periods nearest first, starting with the adjacent one", () => {
    renderAdvicePanel(container, { advice: adviseJune, error: null, loading: false });
    expect(container.querySelector(".wait-badge")).not.toBeNull();
    expect(container.textContent).toContain(`June is rank ${adviseJune.current_rank}`);
    const buttons = Array.from(container.querySelectorAll(".suggestion"));
    expect(buttons).toHaveLength(adviseJune.better_periods.length);
    expect((buttons[0] as HTMLElement).dataset.period).toBe("July");
    expect(buttons[0]!.textContent).toBe("July (rank 1, 1 period away)");
    const distances = buttons.map((b) => {
      const match = /(\d+) periods? away/.exec(b.textContent ?? "");
      return Number(match![1]);
    });
    const sorted = [...distances].sort((a, b) => a - b);
    expect(distances).toEqual(sorted);
  });

  it("invokes the pick handler with the clicked period", () => {
    const onPick = vi.fn();
    renderAdvicePanel(container, { advice: adviseJune, error: null, loading: false, onPick });
    (container.querySelector(".suggestion") as HTMLButtonElement).click();
    expect(onPick).toHaveBeenCalledWith("July");
  });
});

describe("degenerate states", () => {
  it("shows a placeholder before a period is chosen", () => {
    renderAdvicePanel(container, { advice: null, error: null, loading: false });
    expect(container.querySelector(".placeholder")).not.toBeNull();
  });

  it("renders the error message when advice failed", () => {
    renderAdvicePanel(container, {
      advice: null,
      error: new Error("no recorded advice"),
      loading: false,
    });
    expect(container.querySelector(".error-panel")!.textContent).toContain("no recorded advice");
  });
});
