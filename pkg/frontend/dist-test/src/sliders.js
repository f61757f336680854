/** Parameter sliders for the symbolic lengths c1..c4, debounced so dragging
 * produces at most one plot request per 100 ms. */
export const PARAM_NAMES = ["c1", "c2", "c3", "c4"];
export const DEBOUNCE_MS = 100;
export function parametersOf(graph) {
    const seen = new Set();
    for (const e of graph.edges) {
        if (typeof e.len === "object")
            seen.add(e.len.param);
    }
    return PARAM_NAMES.filter((p) => seen.has(p));
}
/** Trailing-edge debouncer with injectable clock for tests. */
export class Debouncer {
    ms;
    schedule;
    cancel;
    handle = null;
    constructor(ms, schedule = (fn, ms) => setTimeout(fn, ms), cancel = (h) => clearTimeout(h)) {
        this.ms = ms;
        this.schedule = schedule;
        this.cancel = cancel;
    }
    call(fn) {
        if (this.handle !== null)
            this.cancel(this.handle);
        this.handle = this.schedule(() => {
            this.handle = null;
            fn();
        }, this.ms);
    }
}
export function buildSliderPanel(graph, onChange, initial = {}) {
    const params = parametersOf(graph);
    const root = document.createElement("div");
    root.className = "sliders";
    const binding = {};
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
