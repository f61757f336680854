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
function byId(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
function main() {
    const api = new ApiClient();
    const explorer = new Explorer(api, {
        plot: byId("dk-plot"),
        graphView: byId("explorer-graph"),
        sliderHost: byId("sliders"),
        markerList: byId("marker-list"),
        status: byId("explorer-status"),
        graphInput: byId("graph-input"),
        loadButton: byId("load-graph"),
        kindSelect: byId("curve-kind"),
        k0Input: byId("k0"),
        k1Input: byId("k1"),
    });
    new RunDashboard(api, {
        configInput: byId("run-config"),
        goalInput: byId("goal-input"),
        startButton: byId("run-start"),
        pauseButton: byId("run-pause"),
        resumeButton: byId("run-resume"),
        stepButton: byId("run-step"),
        stopButton: byId("run-stop"),
        setGoalButton: byId("run-set-goal"),
        trajectory: byId("trajectory-plot"),
        graphView: byId("run-graph"),
        status: byId("run-status"),
        stepInfo: byId("step-info"),
    });
    byId("graph-input").value =
        JSON.stringify(TRIANGLE_WITH_PENDANT, null, 1);
    byId("run-config").value =
        JSON.stringify(SAMPLE_RUN_CONFIG, null, 1);
    byId("goal-input").value =
        JSON.stringify({ type: "target", space: "lambda", values: [0, 39.478, 88.826, 88.826] }, null, 1);
    for (const button of document.querySelectorAll(".tab-button")) {
        button.addEventListener("click", () => {
            for (const panel of document.querySelectorAll(".tab-panel")) {
                panel.hidden = panel.id !== button.dataset.panel;
            }
            for (const other of document.querySelectorAll(".tab-button")) {
                other.classList.toggle("active", other === button);
            }
        });
    }
    void explorer;
}
main();
