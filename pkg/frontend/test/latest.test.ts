import { describe, expect, it } from "vitest";

import { LatestGate, debounce } from "../src/latest.js";

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

describe("LatestGate", () => {
  it("runs a single request directly", async () => {
    const gate = new LatestGate<number>();
    const out = await gate.submit("a", async () => 42);
    expect(out).toBe(42);
    expect(gate.isCurrent("a")).toBe(true);
  });

  it("keeps at most one in flight and discards the superseded middle", async () => {
    const gate = new LatestGate<string>();
    const started: string[] = [];
    const settled: string[] = [];
    gate.onSettled = (_k, v) => settled.push(v);

    const slow = (v: string, ms: number) => async () => {
      started.push(v);
      await sleep(ms);
      return v;
    };
    const p1 = gate.submit("k1", slow("first", 40));
    const p2 = gate.submit("k2", slow("second", 5));  // queued
    const p3 = gate.submit("k3", slow("third", 5));   // replaces queued second
    const [r1, r2, r3] = await Promise.all([p1, p2, p3]);
    await sleep(60);

    expect(r1).toBe("first");      // oldest completes and reports
    expect(r2).toBeNull();         // superseded while queued
    expect(r3).toBeNull();         // queued; arrives via onSettled
    expect(started).toEqual(["first", "third"]); // middle never ran
    expect(settled).toEqual(["third"]);
  });

  it("marks only the newest key current", async () => {
    const gate = new LatestGate<number>();
    void gate.submit("old", async () => {
      await sleep(20);
      return 1;
    });
    void gate.submit("new", async () => 2);
    await sleep(40);
    expect(gate.isCurrent("new")).toBe(true);
    expect(gate.isCurrent("old")).toBe(false);
  });
});

describe("debounce", () => {
  it("collapses a burst into the trailing call", async () => {
    const seen: number[] = [];
    const push = debounce((v: number) => seen.push(v), 20);
    push(1);
    push(2);
    push(3);
    await sleep(50);
    expect(seen).toEqual([3]);
  });

  it("fires again after the quiet period", async () => {
    const seen: number[] = [];
    const push = debounce((v: number) => seen.push(v), 10);
    push(1);
    await sleep(30);
    push(2);
    await sleep(30);
    expect(seen).toEqual([1, 2]);
  });
});
