/** Small DOM and formatting helpers shared by the views. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function svgEl(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function fmt(x: number | null | undefined): string {
  if (x === null || x === undefined || !Number.isFinite(x)) return "-";
  return x.toFixed(2);
}

export function fmtSigned(x: number): string {
  return (x >= 0 ? "+" : "") + x.toFixed(2);
}

/** Short axis label: months shrink to three letters, week labels pass through. */
export function shortPeriod(period: string): string {
  return /^W\d+$/.test(period) ? period : period.slice(0, 3);
}
