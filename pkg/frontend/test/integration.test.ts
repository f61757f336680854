/** Integration tests against a live qgraph service (spawned here).
 *
 * S1: explorer root markers for the triangle configuration sit within one
 *     plot-sample spacing of 2*pi and 4*pi, computed from API data only.
 * S2: start exp5, pause, replace the goal, resume; the resulting log has a
 *     phase marker, later steps are scored under the new goal, and the
 *     chosen-graph sequence matches an equivalent CLI two-phase run.
 */

import assert from "node:assert/strict";
import { execFileSync, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import test, { after, before } from "node:test";

import { ApiClient, RunState } from "../src/api.js";
import { defaultThreshold, extractRootMarkers, sampleSpacing } from "../src/markers.js";

const PYTHON = process.env.QG_PYTHON ?? "python3";

let proc: ChildProcess;
let api: ApiClient;
let workdir: string;

function startServer(): Promise<{ proc: ChildProcess; base: string }> {
  return new Promise((resolve, reject) => {
    const child = spawn(PYTHON, ["-u", "-m", "qgraph.cli", "serve", "--port", "0"],
                        { stdio: ["ignore", "pipe", "pipe"] });
    let buffer = "";
    const onData = (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/qgraph service on (http:\/\/[^\s]+)/);
      if (match) {
        child.stdout!.off("data", onData);
        resolve({ proc: child, base: match[1] });
      }
    };
    child.stdout!.on("data", onData);
    child.stderr!.on("data", (chunk: Buffer) => process.stderr.write(chunk));
    child.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
    setTimeout(() => reject(new Error("server did not start within 30s")), 30_000);
  });
}

before(async () => {
  workdir = mkdtempSync(join(tmpdir(), "qgraph-ui-test-"));
  execFileSync(PYTHON, ["-m", "qgraph.cli", "experiments", "--export", workdir]);
  const started = await startServer();
  proc = started.proc;
  api = new ApiClient(started.base);
});

after(() => {
  proc?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

async function pollUntil(predicate: (s: RunState) => boolean, timeoutMs = 120_000):
    Promise<RunState> {
  const t0 = Date.now();
  for (;;) {
    const state = await api.runState(0);
    if (predicate(state)) return state;
    if (Date.now() - t0 > timeoutMs) {
      throw new Error(`timed out; last state ${state.state} at ${state.total_steps} steps`);
    }
    await new Promise((r) => setTimeout(r, 150));
  }
}

test("S1: triangle root markers sit at 2pi and 4pi (API data only)", async () => {
  await api.putGraph({
    vertices: 3,
    edges: [
      { u: 0, v: 1, len: 1 / 3 },
      { u: 1, v: 2, len: 1 / 3 },
      { u: 2, v: 0, len: 1 / 3 },
    ],
  });
  const samples = await api.getDk({ k0: 0, k1: 13, n: 1000 });
  const markers = extractRootMarkers(samples.k, samples.sigma_min,
                                     defaultThreshold(samples.k));
  const spacing = sampleSpacing(samples.k);
  for (const target of [2 * Math.PI, 4 * Math.PI]) {
    const hit = markers.find((m) => Math.abs(m.k - target) <= spacing);
    assert.ok(hit, `no marker within ${spacing} of ${target}`);
  }
  // and nothing spurious: every marker is near a true circle root 2*n*pi
  for (const m of markers) {
    const n = Math.round(m.k / (2 * Math.PI));
    assert.ok(Math.abs(m.k - 2 * n * Math.PI) <= spacing, `marker at ${m.k}`);
  }
});

test("S2: pause, replace goal, resume matches a CLI two-phase run", async () => {
  const exp5 = JSON.parse(readFileSync(join(workdir, "exp5.json"), "utf-8"));
  const newGoal = { type: "max_lambda1" };

  assert.deepEqual((await api.startRun(exp5)).state, "running");
  await pollUntil((s) => s.total_steps >= 2);
  await api.pause();
  const paused = await pollUntil((s) => s.state === "paused");
  const splitStep = paused.total_steps;
  assert.ok(splitStep >= 2 && splitStep < exp5.steps);

  await api.setGoal(newGoal);
  await api.resume();
  const done = await pollUntil((s) => s.state === "done");

  // phase marker recorded at the split boundary
  const changes = done.events.filter((e) => e.type === "goal_change");
  assert.equal(changes.length, 1);
  assert.equal(changes[0].at_step, splitStep);

  // steps after the marker are scored under the new goal (-lambda_1 < 0,
  // while the target-distance phase scores are positive)
  const phase0 = done.steps.filter((s) => s.phase === 0);
  const phase1 = done.steps.filter((s) => s.phase === 1);
  assert.equal(phase0.length, splitStep);
  assert.equal(phase1.length, exp5.steps - splitStep);
  assert.ok(phase0.every((s) => s.chosen_score > 0));
  assert.ok(phase1.every((s) => s.chosen_score < 0));

  // equivalent CLI program: exp5's goal for splitStep steps, then the new goal
  const twoPhase = {
    ...exp5,
    goal: {
      type: "program",
      phases: [
        { goal: exp5.goal, stop: { type: "steps", steps: splitStep } },
        { goal: newGoal },
      ],
    },
  };
  const cfgPath = join(workdir, "two_phase.json");
  writeFileSync(cfgPath, JSON.stringify(twoPhase));
  const outDir = join(workdir, "cli_run");
  execFileSync(PYTHON, ["-m", "qgraph.cli", "evolve", cfgPath, "--out", outDir]);
  const logLines = readFileSync(join(outDir, "log.jsonl"), "utf-8").trim().split("\n");
  const cliChosen = logLines.slice(1).map((line) => JSON.parse(line).chosen);
  const uiChosen = done.steps.map((s) => s.chosen);
  assert.equal(cliChosen.length, uiChosen.length);
  for (let i = 0; i < cliChosen.length; i++) {
    assert.deepEqual(uiChosen[i], cliChosen[i], `step ${i} differs`);
  }
});
