/** Run dashboard: start/pause/step/resume/stop an evolution run, replace
 * the goal at a step boundary, and watch k-value trajectories approach the
 * target lines. */
import { renderGraph } from "./graphview.js";
import { renderTrajectories } from "./plot.js";
const POLL_MS = 500;
/** Horizontal target lines live in k-space: sqrt of the goal's lambda values. */
export function targetLinesFor(goal) {
    if (!goal)
        return [];
    if (goal.type === "target" && Array.isArray(goal.values)) {
        const ks = goal.values.filter((v) => v > 0);
        return (goal.space ?? "lambda") === "k" ? ks : ks.map(Math.sqrt);
    }
    if (goal.type === "program")
        return [];
    return [];
}
export function trajectoryPoints(steps) {
    return steps.map((s) => ({ step: s.step, ks: s.k_prefix.slice(0, 4), phase: s.phase }));
}
export class RunDashboard {
    api;
    ui;
    steps = [];
    state = null;
    timer = null;
    targetKs = [];
    constructor(api, ui) {
        this.api = api;
        this.ui = ui;
        ui.startButton.addEventListener("click", () => void this.start());
        ui.pauseButton.addEventListener("click", () => void this.act(() => this.api.pause()));
        ui.resumeButton.addEventListener("click", () => void this.act(() => this.api.resume()));
        ui.stepButton.addEventListener("click", () => void this.act(() => this.api.stepOnce()));
        ui.stopButton.addEventListener("click", () => void this.act(() => this.api.stop()));
        ui.setGoalButton.addEventListener("click", () => void this.setGoal());
    }
    setStatus(text, isError = false) {
        this.ui.status.textContent = text;
        this.ui.status.classList.toggle("error", isError);
    }
    async act(action) {
        try {
            await action();
        }
        catch (exc) {
            this.setStatus(exc.message, true);
        }
        await this.poll();
    }
    async start() {
        let config;
        try {
            config = JSON.parse(this.ui.configInput.value);
        }
        catch (exc) {
            this.setStatus(`run config does not parse: ${exc.message}`, true);
            return;
        }
        try {
            await this.api.startRun(config);
        }
        catch (exc) {
            this.setStatus(exc.message, true);
            return;
        }
        this.steps = [];
        this.targetKs = targetLinesFor(config.goal);
        this.startPolling();
    }
    async setGoal() {
        let goal;
        try {
            goal = JSON.parse(this.ui.goalInput.value);
        }
        catch (exc) {
            this.setStatus(`goal does not parse: ${exc.message}`, true);
            return;
        }
        try {
            await this.api.setGoal(goal);
            this.targetKs = targetLinesFor(goal);
            this.setStatus("goal queued; applies at the next step boundary");
        }
        catch (exc) {
            this.setStatus(exc.message, true);
        }
    }
    startPolling() {
        if (this.timer !== null)
            window.clearInterval(this.timer);
        this.timer = window.setInterval(() => void this.poll(), POLL_MS);
        void this.poll();
    }
    async poll() {
        let state;
        try {
            state = await this.api.runState(this.steps.length);
        }
        catch (exc) {
            this.setStatus(exc.message, true);
            return;
        }
        this.state = state;
        this.steps.push(...state.steps);
        this.render();
        if (state.state === "done" && this.timer !== null) {
            window.clearInterval(this.timer);
            this.timer = null;
        }
    }
    render() {
        const state = this.state;
        if (!state)
            return;
        const boundaries = state.events
            .filter((e) => e.type === "goal_change" || e.type === "phase_switch")
            .map((e) => e.at_step);
        renderTrajectories(this.ui.trajectory, trajectoryPoints(this.steps), {
            targetKs: this.targetKs,
            phaseBoundaries: boundaries,
        });
        const last = this.steps[this.steps.length - 1];
        if (last) {
            renderGraph(this.ui.graphView, last.chosen);
            this.ui.stepInfo.textContent =
                `step ${last.step}: ${last.n_candidates} candidates, ` +
                    `score ${last.chosen_score.toPrecision(6)}, phase ${last.phase}`;
        }
        this.setStatus(`run ${state.state}; ${state.total_steps}/${state.configured_steps} steps`);
        const paused = state.state === "paused";
        const running = state.state === "running";
        this.ui.pauseButton.disabled = !running;
        this.ui.resumeButton.disabled = !paused;
        this.ui.stepButton.disabled = !paused;
        this.ui.stopButton.disabled = !(running || paused);
        this.ui.setGoalButton.disabled = !(running || paused);
    }
}
