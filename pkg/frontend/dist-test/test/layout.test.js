import assert from "node:assert/strict";
import test from "node:test";
import { layoutGraph, normalizeToUnitBox } from "../src/layout.js";
import { edgeLabel, parallelOffsets } from "../src/graphview.js";
const dumbbell = {
    vertices: 8,
    edges: [
        // two K4 blocks joined by one edge
        ...[0, 1, 2, 3].flatMap((i, _, arr) => arr.filter((j) => j > i).map((j) => ({ u: i, v: j, len: 0.0769 }))),
        ...[4, 5, 6, 7].flatMap((i, _, arr) => arr.filter((j) => j > i).map((j) => ({ u: i, v: j, len: 0.0769 }))),
        { u: 0, v: 4, len: 0.0769 },
    ],
};
test("layout is deterministic", () => {
    const a = layoutGraph(dumbbell);
    const b = layoutGraph(dumbbell);
    assert.deepEqual(a, b);
});
test("layout keeps points in the unit box", () => {
    for (const p of layoutGraph(dumbbell)) {
        assert.ok(p.x >= -1e-9 && p.x <= 1 + 1e-9);
        assert.ok(p.y >= -1e-9 && p.y <= 1 + 1e-9);
    }
});
test("dumbbell blocks separate visually", () => {
    const pos = layoutGraph(dumbbell);
    const center = (ids) => ({
        x: ids.reduce((s, i) => s + pos[i].x, 0) / ids.length,
        y: ids.reduce((s, i) => s + pos[i].y, 0) / ids.length,
    });
    const a = center([0, 1, 2, 3]);
    const b = center([4, 5, 6, 7]);
    const blockSpread = Math.hypot(pos[1].x - pos[2].x, pos[1].y - pos[2].y);
    const clusterDistance = Math.hypot(a.x - b.x, a.y - b.y);
    assert.ok(clusterDistance > blockSpread, "clusters should sit apart");
});
test("normalizeToUnitBox preserves aspect ratio", () => {
    const pos = normalizeToUnitBox([
        { x: 0, y: 0 }, { x: 10, y: 0 }, { x: 10, y: 5 },
    ]);
    const width = Math.max(...pos.map((p) => p.x)) - Math.min(...pos.map((p) => p.x));
    const height = Math.max(...pos.map((p) => p.y)) - Math.min(...pos.map((p) => p.y));
    assert.ok(Math.abs(width / height - 2) < 1e-9);
});
test("parallel edges get distinct symmetric offsets", () => {
    assert.deepEqual(parallelOffsets(1), [0]);
    const three = parallelOffsets(3);
    assert.equal(three.length, 3);
    assert.equal(three[1], 0);
    assert.equal(three[0], -three[2]);
    assert.equal(new Set(three).size, 3);
});
test("edge labels show three significant digits or the parameter", () => {
    assert.equal(edgeLabel(0.333333), "0.333");
    assert.equal(edgeLabel(0.25), "0.250");
    assert.equal(edgeLabel({ param: "c2", scale: 1 }), "c2");
    assert.equal(edgeLabel({ param: "c1", scale: 2 }), "2.00·c1");
});
