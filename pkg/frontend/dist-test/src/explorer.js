/** Secular-function explorer: load a graph, drag c1..c4 sliders, watch the
 * sigma_min (or Re/Im det) curve and its root markers re-render. */
import { renderGraph } from "./graphview.js";
import { defaultThreshold, extractRootMarkers } from "./markers.js";
import { renderCurve } from "./plot.js";
import { buildSliderPanel } from "./sliders.js";
const SAMPLES = 1000;
export class Explorer {
    api;
    ui;
    graph = null;
    binding = {};
    kind = "sigma_min";
    k0 = 0;
    k1 = 4 * Math.PI;
    inflight = null;
    sliders = null;
    lastMarkers = [];
    constructor(api, ui) {
        this.api = api;
        this.ui = ui;
        ui.loadButton.addEventListener("click", () => void this.loadFromText());
        ui.kindSelect.addEventListener("change", () => {
            this.kind = ui.kindSelect.value;
            void this.refresh();
        });
        const windowChanged = () => {
            const k0 = Number(ui.k0Input.value);
            const k1 = Number(ui.k1Input.value);
            if (Number.isFinite(k0) && Number.isFinite(k1) && k1 > k0) {
                this.k0 = k0;
                this.k1 = k1;
                void this.refresh();
            }
        };
        ui.k0Input.addEventListener("change", windowChanged);
        ui.k1Input.addEventListener("change", windowChanged);
    }
    markers() {
        return this.lastMarkers;
    }
    setStatus(text, isError = false) {
        this.ui.status.textContent = text;
        this.ui.status.classList.toggle("error", isError);
    }
    async loadFromText() {
        let doc;
        try {
            doc = JSON.parse(this.ui.graphInput.value);
        }
        catch (exc) {
            this.setStatus(`graph JSON does not parse: ${exc.message}`, true);
            return;
        }
        try {
            await this.api.putGraph(doc);
        }
        catch (exc) {
            this.setStatus(exc.message, true);
            return;
        }
        this.graph = doc;
        this.sliders = buildSliderPanel(doc, (binding) => {
            this.binding = binding;
            void this.refresh();
        });
        this.binding = this.sliders.values();
        this.ui.sliderHost.replaceChildren(this.sliders.root);
        renderGraph(this.ui.graphView, doc);
        this.setStatus("graph loaded");
        await this.refresh();
    }
    async refresh() {
        if (!this.graph) {
            this.setStatus("load a graph to plot");
            return;
        }
        this.inflight?.abort();
        const controller = new AbortController();
        this.inflight = controller;
        let samples;
        try {
            samples = await this.api.getDk({ k0: this.k0, k1: this.k1, n: SAMPLES, bind: this.binding }, controller.signal);
        }
        catch (exc) {
            if (exc.name !== "AbortError") {
                this.setStatus(exc.message, true);
            }
            return;
        }
        if (controller !== this.inflight)
            return; // a newer request superseded us
        const markers = extractRootMarkers(samples.k, samples.sigma_min, defaultThreshold(samples.k));
        this.lastMarkers = markers;
        renderCurve(this.ui.plot, samples, { kind: this.kind, markers });
        this.ui.markerList.replaceChildren();
        for (const m of markers) {
            const item = document.createElement("li");
            item.textContent = `k ≈ ${m.k.toFixed(4)} (${(m.k / Math.PI).toFixed(4)}π)`;
            this.ui.markerList.append(item);
        }
        this.setStatus(`${markers.length} root markers in window`);
    }
}
