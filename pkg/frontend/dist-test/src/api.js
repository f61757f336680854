/** Typed client for the qgraph HTTP service. All numbers come from the
 * server; the UI performs no spectral math of its own. */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
async function decode(resp) {
    const body = await resp.json().catch(() => ({}));
    if (!resp.ok) {
        throw new ApiError(resp.status, body.error ?? resp.statusText);
    }
    return body;
}
export class ApiClient {
    base;
    constructor(base = "") {
        this.base = base;
    }
    url(path) {
        return this.base + path;
    }
    getGraph() {
        return fetch(this.url("/api/graph")).then((r) => decode(r));
    }
    putGraph(graph) {
        return fetch(this.url("/api/graph"), {
            method: "PUT",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(graph),
        }).then((r) => decode(r)).then(() => undefined);
    }
    /** Sample sigma_min and the determinant on n uniform intervals of [k0, k1].
     * Pass an AbortSignal so a newer request can cancel this one. */
    getDk(params, signal) {
        const bind = Object.entries(params.bind ?? {})
            .map(([name, value]) => `${name}=${value}`)
            .join(",");
        const q = new URLSearchParams({
            k0: String(params.k0),
            k1: String(params.k1),
            n: String(params.n),
        });
        if (bind)
            q.set("bind", bind);
        return fetch(this.url(`/api/dk?${q}`), { signal }).then((r) => decode(r));
    }
    postSpectrum(body) {
        return fetch(this.url("/api/spectrum"), {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        }).then((r) => decode(r));
    }
    startRun(config) {
        return fetch(this.url("/api/run"), {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(config),
        }).then((r) => decode(r));
    }
    runState(cursor = 0) {
        return fetch(this.url(`/api/run/state?cursor=${cursor}`)).then((r) => decode(r));
    }
    setGoal(goal) {
        return fetch(this.url("/api/run/goal"), {
            method: "PUT",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(goal),
        }).then((r) => decode(r)).then(() => undefined);
    }
    pause() {
        return fetch(this.url("/api/run/pause"), { method: "POST" }).then((r) => decode(r));
    }
    resume() {
        return fetch(this.url("/api/run/resume"), { method: "POST" }).then((r) => decode(r));
    }
    stepOnce() {
        return fetch(this.url("/api/run/step"), { method: "POST" }).then((r) => decode(r));
    }
    stop() {
        return fetch(this.url("/api/run/stop"), { method: "POST" }).then((r) => decode(r));
    }
}
