/** Typed client for the qgraph HTTP service. All numbers come from the
 * server; the UI performs no spectral math of its own. */

export type LengthSpec = number | { param: string; scale: number };

export interface GraphEdge {
  u: number;
  v: number;
  len: LengthSpec;
}

export interface GraphDoc {
  vertices: number;
  edges: GraphEdge[];
  allow_loops?: boolean;
}

export interface DkSamples {
  k: number[];
  sigma_min: number[];
  re_det: number[];
  im_det: number[];
}

export interface SpectrumRoot {
  k: number;
  multiplicity: number;
  lambda: number;
}

export interface SpectrumResult {
  mode: string;
  k_max: number;
  roots: SpectrumRoot[];
}

export interface RunStepRecord {
  step: number;
  phase: number;
  n_candidates: number;
  chosen_index: number;
  chosen_score: number;
  k_prefix: number[];
  stop_triggered: boolean;
  chosen: GraphDoc;
  parent: GraphDoc;
}

export interface RunEvent {
  type: string;
  at_step: number;
  phase?: number;
}

export type RunStateName = "idle" | "running" | "paused" | "done";

export interface RunState {
  state: RunStateName;
  phase: number;
  total_steps: number;
  configured_steps: number;
  cursor: number;
  steps: RunStepRecord[];
  events: RunEvent[];
  error?: string | null;
  current_graph?: GraphDoc;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function decode<T>(resp: Response): Promise<T> {
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    throw new ApiError(resp.status, (body as { error?: string }).error ?? resp.statusText);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  getGraph(): Promise<GraphDoc> {
    return fetch(this.url("/api/graph")).then((r) => decode<GraphDoc>(r));
  }

  putGraph(graph: GraphDoc): Promise<void> {
    return fetch(this.url("/api/graph"), {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(graph),
    }).then((r) => decode(r)).then(() => undefined);
  }

  /** Sample sigma_min and the determinant on n uniform intervals of [k0, k1].
   * Pass an AbortSignal so a newer request can cancel this one. */
  getDk(params: { k0: number; k1: number; n: number; bind?: Record<string, number> },
        signal?: AbortSignal): Promise<DkSamples> {
    const bind = Object.entries(params.bind ?? {})
      .map(([name, value]) => `${name}=${value}`)
      .join(",");
    const q = new URLSearchParams({
      k0: String(params.k0),
      k1: String(params.k1),
      n: String(params.n),
    });
    if (bind) q.set("bind", bind);
    return fetch(this.url(`/api/dk?${q}`), { signal }).then((r) => decode<DkSamples>(r));
  }

  postSpectrum(body: { k_max?: number; mode?: string; bind?: Record<string, number> }):
      Promise<SpectrumResult> {
    return fetch(this.url("/api/spectrum"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => decode<SpectrumResult>(r));
  }

  startRun(config: unknown): Promise<{ state: RunStateName }> {
    return fetch(this.url("/api/run"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    }).then((r) => decode(r));
  }

  runState(cursor = 0): Promise<RunState> {
    return fetch(this.url(`/api/run/state?cursor=${cursor}`)).then((r) => decode<RunState>(r));
  }

  setGoal(goal: unknown): Promise<void> {
    return fetch(this.url("/api/run/goal"), {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(goal),
    }).then((r) => decode(r)).then(() => undefined);
  }

  pause(): Promise<{ state: RunStateName }> {
    return fetch(this.url("/api/run/pause"), { method: "POST" }).then((r) => decode(r));
  }

  resume(): Promise<{ state: RunStateName }> {
    return fetch(this.url("/api/run/resume"), { method: "POST" }).then((r) => decode(r));
  }

  stepOnce(): Promise<RunState> {
    return fetch(this.url("/api/run/step"), { method: "POST" }).then((r) => decode<RunState>(r));
  }

  stop(): Promise<{ state: RunStateName }> {
    return fetch(this.url("/api/run/stop"), { method: "POST" }).then((r) => decode(r));
  }
}
