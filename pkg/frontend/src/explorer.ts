/** Secular-function explorer: load a graph, drag c1..c4 sliders, watch the
 * sigma_min (or Re/Im det) curve and its root markers re-render. */

import { ApiClient, DkSamples, GraphDoc } from "./api.js";
import { renderGraph } from "./graphview.js";
import { defaultThreshold, extractRootMarkers, RootMarker } from "./markers.js";
import { CurveKind, renderCurve } from "./plot.js";
import { buildSliderPanel, SliderPanel } from "./sliders.js";

const SAMPLES = 1000;

export class Explorer {
  private graph: GraphDoc | null = null;
  private binding: Record<string, number> = {};
  private kind: CurveKind = "sigma_min";
  private k0 = 0;
  private k1 = 4 * Math.PI;
  private inflight: AbortController | null = null;
  private sliders: SliderPanel | null = null;
  private lastMarkers: RootMarker[] = [];

  constructor(
    private readonly api: ApiClient,
    private readonly ui: {
      plot: SVGSVGElement;
      graphView: SVGSVGElement;
      sliderHost: HTMLElement;
      markerList: HTMLElement;
      status: HTMLElement;
      graphInput: HTMLTextAreaElement;
      loadButton: HTMLButtonElement;
      kindSelect: HTMLSelectElement;
      k0Input: HTMLInputElement;
      k1Input: HTMLInputElement;
    },
  ) {
    ui.loadButton.addEventListener("click", () => void this.loadFromText());
    ui.kindSelect.addEventListener("change", () => {
      this.kind = ui.kindSelect.value as CurveKind;
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

  markers(): RootMarker[] {
    return this.lastMarkers;
  }

  private setStatus(text: string, isError = false): void {
    this.ui.status.textContent = text;
    this.ui.status.classList.toggle("error", isError);
  }

  async loadFromText(): Promise<void> {
    let doc: GraphDoc;
    try {
      doc = JSON.parse(this.ui.graphInput.value) as GraphDoc;
    } catch (exc) {
      this.setStatus(`graph JSON does not parse: ${(exc as Error).message}`, true);
      return;
    }
    try {
      await this.api.putGraph(doc);
    } catch (exc) {
      this.setStatus((exc as Error).message, true);
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

  async refresh(): Promise<void> {
    if (!this.graph) {
      this.setStatus("load a graph to plot");
      return;
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    let samples: DkSamples;
    try {
      samples = await this.api.getDk(
        { k0: this.k0, k1: this.k1, n: SAMPLES, bind: this.binding },
        controller.signal,
      );
    } catch (exc) {
      if ((exc as Error).name !== "AbortError") {
        this.setStatus((exc as Error).message, true);
      }
      return;
    }
    if (controller !== this.inflight) return; // a newer request superseded us
    const markers = extractRootMarkers(
      samples.k, samples.sigma_min, defaultThreshold(samples.k));
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
