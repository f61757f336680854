/** Parameter sliders for the symbolic lengths c1..c4, debounced so dragging
 * produces at most one plot request per 100 ms. */

import type { GraphDoc } from "./api.js";

export const PARAM_NAMES = ["c1", "c2", "c3", "c4"] as const;
export const DEBOUNCE_MS = 100;

export function parametersOf(graph: GraphDoc): string[] {
  const seen = new Set<string>();
  for (const e of graph.edges) {
    if (typeof e.len === "object") seen.add(e.len.param);
  }
  return PARAM_NAMES.filter((p) => seen.has(p));
}

type Scheduler = (fn: () => void, ms: number) => unknown;
type Canceler = (handle: unknown) => void;

/** Trailing-edge debouncer with injectable clock for tests. */
export class Debouncer {
  private handle: unknown = null;

  constructor(
    private readonly ms: number,
    private readonly schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
    private readonly cancel: Canceler = (h) => clearTimeout(h as number),
  ) {}

  call(fn: () => void): void {
    if (this.handle !== null) this.cancel(this.handle);
    this.handle = this.schedule(() => {
      this.handle = null;
      fn();
    }, this.ms);
  }
}

export interface SliderPanel {
  /** Current binding of every parameter in the graph. */
  values(): Record<string, number>;
  root: HTMLElement;
}

export function buildSliderPanel(
  graph: GraphDoc,
  onChange: (binding: Record<string, number>) => void,
  initial: Record<string, number> = {},
): SliderPanel {
  const params = parametersOf(graph);
  const root = document.createElement("div");
  root.className = "sliders";
  const binding: Record<string, number> = {};
  const debouncer = new Debouncer(DEBOUNCE_MS);

  for (const name of params) {
    binding[name] = initial[name] ?? Math.PI;
    const row = document.createElement("label");
    row.className = "slider-row";
    const caption = document.createElement("span");
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(4 * Math.PI);
    slider.step = "0.001";
    slider.value = String(binding[name]);
    const update = () => {
      caption.textContent = `${name} = ${binding[name].toFixed(3)}`;
    };
    slider.addEventListener("input", () => {
      binding[name] = Number(slider.value);
      update();
      debouncer.call(() => onChange({ ...binding }));
    });
    update();
    row.append(caption, slider);
    root.append(row);
  }
  return { values: () => ({ ...binding }), root };
}
