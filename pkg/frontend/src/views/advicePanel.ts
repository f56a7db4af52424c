/** Advice panel: stay-or-wait verdict for the period the user is in now. */

import type { AdvicePayload } from "../api.js";
import { clear, el } from "../dom.js";

export interface AdvicePanelProps {
  advice: AdvicePayload | null;
  error: Error | null;
  loading: boolean;
  onPick?: (period: string) => void;
  onRetry?: () => void;
}

function distanceText(distance: number): string {
  return distance === 1 ? "1 period away" : `${distance} periods away`;
}

export function renderAdvicePanel(container: HTMLElement, props: AdvicePanelProps): void {
  clear(container);
  container.appendChild(el("h2", undefined, "sell now or wait"));

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
  if (!props.advice) {
    container.appendChild(el("p", "placeholder", "pick the period you are in"));
    return;
  }

  const advice = props.advice;
  const header = el("div", "advice-header");
  const badge = el(
    "span",
    advice.stay ? "badge stay-badge" : "badge wait-badge",
    advice.stay ? "stay" : "consider waiting",
  );
  header.appendChild(badge);
  header.appendChild(el(
    "span",
    "advice-rank",
    `${advice.current_period} is rank ${advice.current_rank}`,
  ));
  container.appendChild(header);

  if (advice.stay) {
    container.appendChild(el(
      "p",
      "advice-note",
      "no nearby period ranks higher; selling in the current period is the best call",
    ));
    return;
  }

  container.appendChild(el("p", "advice-note", "higher-ranked periods, nearest first:"));
  const list = el("ul", "suggestions");
  for (const better of advice.better_periods) {
    const item = el("li");
    const button = el(
      "button",
      "suggestion",
      `${better.period} (rank ${better.rank}, ${distanceText(better.calendar_distance)})`,
    );
    button.dataset.period = better.period;
    if (props.onPick) {
      const pick = props.onPick;
      button.addEventListener("click", () => pick(better.period));
    }
    item.appendChild(button);
    list.appendChild(item);
  }
  container.appendChild(list);
}
