/** SVG chart builders. Pure string/geometry helpers are exported separately
 * from the thin DOM wrappers so they can be unit-tested in node. */
export const DEFAULT_BOX = {
    width: 860,
    height: 320,
    margin: { left: 52, right: 16, top: 12, bottom: 30 },
};
export function linearScale(d0, d1, r0, r1) {
    const span = d1 - d0 || 1;
    return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}
export function pathFrom(xs, ys, sx, sy) {
    const parts = [];
    for (let i = 0; i < xs.length; i++) {
        const cmd = i === 0 ? "M" : "L";
        parts.push(`${cmd}${sx(xs[i]).toFixed(2)},${sy(ys[i]).toFixed(2)}`);
    }
    return parts.join(" ");
}
export function curveValues(samples, kind) {
    return samples[kind];
}
/** Tick positions at multiples of pi covering [k0, k1]. */
export function piTicks(k0, k1) {
    const out = [];
    for (let n = Math.ceil(k0 / Math.PI); n * Math.PI <= k1 + 1e-9; n++) {
        out.push(n * Math.PI);
    }
    return out;
}
const SVG_NS = "http://www.w3.org/2000/svg";
function el(tag, attrs) {
    const node = document.createElementNS(SVG_NS, tag);
    for (const [key, value] of Object.entries(attrs)) {
        node.setAttribute(key, String(value));
    }
    return node;
}
/** Render the sigma_min (or Re/Im det) curve with root markers. */
export function renderCurve(svg, samples, opts) {
    const box = opts.box ?? DEFAULT_BOX;
    svg.replaceChildren();
    svg.setAttribute("viewBox", `0 0 ${box.width} ${box.height}`);
    const values = curveValues(samples, opts.kind);
    const k0 = samples.k[0];
    const k1 = samples.k[samples.k.length - 1];
    let lo = Math.min(...values);
    let hi = Math.max(...values);
    if (opts.kind === "sigma_min")
        lo = 0;
    if (hi - lo < 1e-12)
        hi = lo + 1;
    const sx = linearScale(k0, k1, box.margin.left, box.width - box.margin.right);
    const sy = linearScale(lo, hi, box.height - box.margin.bottom, box.margin.top);
    for (const tick of piTicks(k0, k1)) {
        svg.append(el("line", {
            x1: sx(tick), x2: sx(tick), y1: box.margin.top,
            y2: box.height - box.margin.bottom, class: "grid",
        }));
        const label = el("text", {
            x: sx(tick), y: box.height - 8, class: "tick",
            "text-anchor": "middle",
        });
        label.textContent = `${Math.round(tick / Math.PI)}π`;
        svg.append(label);
    }
    if (lo < 0 && hi > 0) {
        svg.append(el("line", {
            x1: box.margin.left, x2: box.width - box.margin.right,
            y1: sy(0), y2: sy(0), class: "axis",
        }));
    }
    svg.append(el("path", {
        d: pathFrom(samples.k, values, sx, sy), class: "curve", fill: "none",
    }));
    for (const m of opts.markers) {
        svg.append(el("circle", { cx: sx(m.k), cy: sy(values[m.index]), r: 4, class: "marker" }));
    }
    const yLabel = el("text", { x: 6, y: box.margin.top + 10, class: "tick" });
    yLabel.textContent = opts.kind;
    svg.append(yLabel);
}
export const SERIES_CLASSES = ["s0", "s1", "s2", "s3"];
/** Render per-step k-value trajectories with horizontal target lines and
 * vertical phase markers. */
export function renderTrajectories(svg, points, opts) {
    const box = opts.box ?? DEFAULT_BOX;
    const seriesCount = opts.seriesCount ?? 4;
    svg.replaceChildren();
    svg.setAttribute("viewBox", `0 0 ${box.width} ${box.height}`);
    if (points.length === 0)
        return;
    const allKs = points.flatMap((p) => p.ks.slice(0, seriesCount)).concat(opts.targetKs);
    const hi = Math.max(...allKs, 1) * 1.08;
    const lastStep = Math.max(points[points.length - 1].step, 1);
    const sx = linearScale(0, lastStep, box.margin.left, box.width - box.margin.right);
    const sy = linearScale(0, hi, box.height - box.margin.bottom, box.margin.top);
    for (const t of opts.targetKs) {
        svg.append(el("line", {
            x1: box.margin.left, x2: box.width - box.margin.right,
            y1: sy(t), y2: sy(t), class: "target",
        }));
    }
    for (const boundary of opts.phaseBoundaries) {
        svg.append(el("line", {
            x1: sx(boundary), x2: sx(boundary),
            y1: box.margin.top, y2: box.height - box.margin.bottom, class: "phase",
        }));
    }
    for (let s = 0; s < seriesCount; s++) {
        const xs = [];
        const ys = [];
        for (const p of points) {
            if (p.ks.length > s) {
                xs.push(p.step);
                ys.push(p.ks[s]);
            }
        }
        if (xs.length === 0)
            continue;
        svg.append(el("path", {
            d: pathFrom(xs, ys, sx, sy),
            class: `curve ${SERIES_CLASSES[s % SERIES_CLASSES.length]}`,
            fill: "none",
        }));
    }
    for (const p of points) {
        const label = el("text", {
            x: sx(p.step), y: box.height - 8, class: "tick", "text-anchor": "middle",
        });
        if (points.length <= 30 || p.step % 2 === 0)
            label.textContent = String(p.step);
        svg.append(label);
    }
}
