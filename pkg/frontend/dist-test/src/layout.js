/** Deterministic force-directed layout for small multigraphs.
 *
 * Vertices start on a circle and relax under spring forces on edges and
 * pairwise repulsion. No randomness: the same graph always lays out the
 * same way, which keeps run-dashboard frames stable between polls.
 */
export function layoutGraph(graph, opts = {}) {
    const n = graph.vertices;
    const iterations = opts.iterations ?? 250;
    const springLength = opts.springLength ?? 1.0;
    const springStrength = opts.springStrength ?? 0.08;
    const repulsion = opts.repulsion ?? 0.6;
    const cooling = opts.cooling ?? 0.995;
    const pos = [];
    for (let i = 0; i < n; i++) {
        const angle = (2 * Math.PI * i) / n;
        // Slight radius stagger so symmetric graphs cannot fold onto a line.
        const r = 1.0 + 0.05 * (i % 3);
        pos.push({ x: r * Math.cos(angle), y: r * Math.sin(angle) });
    }
    if (n === 1)
        return pos;
    let temperature = 0.12;
    for (let it = 0; it < iterations; it++) {
        const force = pos.map(() => ({ x: 0, y: 0 }));
        for (let i = 0; i < n; i++) {
            for (let j = i + 1; j < n; j++) {
                const dx = pos[i].x - pos[j].x;
                const dy = pos[i].y - pos[j].y;
                const d2 = Math.max(dx * dx + dy * dy, 1e-6);
                const f = repulsion / d2;
                const d = Math.sqrt(d2);
                force[i].x += (f * dx) / d;
                force[i].y += (f * dy) / d;
                force[j].x -= (f * dx) / d;
                force[j].y -= (f * dy) / d;
            }
        }
        for (const e of graph.edges) {
            if (e.u === e.v)
                continue;
            const dx = pos[e.v].x - pos[e.u].x;
            const dy = pos[e.v].y - pos[e.u].y;
            const d = Math.max(Math.hypot(dx, dy), 1e-6);
            const f = springStrength * (d - springLength);
            force[e.u].x += (f * dx) / d;
            force[e.u].y += (f * dy) / d;
            force[e.v].x -= (f * dx) / d;
            force[e.v].y -= (f * dy) / d;
        }
        for (let i = 0; i < n; i++) {
            const mag = Math.max(Math.hypot(force[i].x, force[i].y), 1e-9);
            const step = Math.min(mag, temperature);
            pos[i].x += (force[i].x / mag) * step;
            pos[i].y += (force[i].y / mag) * step;
        }
        temperature *= cooling;
    }
    return normalizeToUnitBox(pos);
}
/** Scale and translate positions into [0,1]^2 preserving aspect ratio. */
export function normalizeToUnitBox(pos) {
    const xs = pos.map((p) => p.x);
    const ys = pos.map((p) => p.y);
    const minX = Math.min(...xs), maxX = Math.max(...xs);
    const minY = Math.min(...ys), maxY = Math.max(...ys);
    const span = Math.max(maxX - minX, maxY - minY, 1e-9);
    const padX = (span - (maxX - minX)) / 2;
    const padY = (span - (maxY - minY)) / 2;
    return pos.map((p) => ({
        x: (p.x - minX + padX) / span,
        y: (p.y - minY + padY) / span,
    }));
}
