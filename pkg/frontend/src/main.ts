import { ApiClient } from "./api.js";
import { Explorer } from "./explorer.js";
import { RunDashboard } from "./rundash.js";

const TRIANGLE_WITH_PENDANT = {
  vertices: 4,
  edges: [
    { u: 0, v: 1, len: { param: "c1", scale: 1.0 } },
    { u: 1, v: 2, len: Math.PI },
    { u: 2, v: 0, len: { param: "c1", scale: 1.0 } },
    { u: 0, v: 3, len: { param: "c2", scale: 1.0 } },
  ],
};

const SAMPLE_RUN_CONFIG = {
  initial_graph: {
    vertices: 3,
    edges: [
      { u: 0, v: 1, len: 0.5 },
      { u: 1, v: 2, len: 0.5 },
    ],
  },
  goal: { type: "max_lambda1" },
  policy: { moves: ["pendant", "between"] },
  steps: 10,
};

function byId<T extends Element>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as unknown as T;
}

function main(): void {
  const api = new ApiClient();

  const explorer = new Explorer(api, {
    plot: byId<SVGSVGElement>("dk-plot"),
    graphView: byId<SVGSVGElement>("explorer-graph"),
    sliderHost: byId<HTMLElement>("sliders"),
    markerList: byId<HTMLElement>("marker-list"),
    status: byId<HTMLElement>("explorer-status"),
    graphInput: byId<HTMLTextAreaElement>("graph-input"),
    loadButton: byId<HTMLButtonElement>("load-graph"),
    kindSelect: byId<HTMLSelectElement>("curve-kind"),
    k0Input: byId<HTMLInputElement>("k0"),
    k1Input: byId<HTMLInputElement>("k1"),
  });

  new RunDashboard(api, {
    configInput: byId<HTMLTextAreaElement>("run-config"),
    goalInput: byId<HTMLTextAreaElement>("goal-input"),
    startButton: byId<HTMLButtonElement>("run-start"),
    pauseButton: byId<HTMLButtonElement>("run-pause"),
    resumeButton: byId<HTMLButtonElement>("run-resume"),
    stepButton: byId<HTMLButtonElement>("run-step"),
    stopButton: byId<HTMLButtonElement>("run-stop"),
    setGoalButton: byId<HTMLButtonElement>("run-set-goal"),
    trajectory: byId<SVGSVGElement>("trajectory-plot"),
    graphView: byId<SVGSVGElement>("run-graph"),
    status: byId<HTMLElement>("run-status"),
    stepInfo: byId<HTMLElement>("step-info"),
  });

  byId<HTMLTextAreaElement>("graph-input").value =
    JSON.stringify(TRIANGLE_WITH_PENDANT, null, 1);
  byId<HTMLTextAreaElement>("run-config").value =
    JSON.stringify(SAMPLE_RUN_CONFIG, null, 1);
  byId<HTMLTextAreaElement>("goal-input").value =
    JSON.stringify({ type: "target", space: "lambda", values: [0, 39.478, 88.826, 88.826] }, null, 1);

  for (const button of document.querySelectorAll<HTMLButtonElement>(".tab-button")) {
    button.addEventListener("click", () => {
      for (const panel of document.querySelectorAll<HTMLElement>(".tab-panel")) {
        panel.hidden = panel.id !== button.dataset.panel;
      }
      for (const other of document.querySelectorAll<HTMLButtonElement>(".tab-button")) {
        other.classList.toggle("active", other === button);
      }
    });
  }

  void explorer;
}

main();
