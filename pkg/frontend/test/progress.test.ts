import { describe, expect, it } from "vitest";

import { renderConfidenceGauge, renderFeatureBand } from "../src/charts.js";
import { ProgressPoller, renderProgressBoard } from "../src/progress.js";
import { progressFixture } from "./fixtures.js";

describe("confidence gauge", () => {
  it("axis is pinned to [-1, 1]", () => {
    const svg = renderConfidenceGauge(0.42);
    expect(svg).toContain(">-1</text>");
    expect(svg).toContain(">1</text>");
    expect(svg).toContain("0.420");
  });

  it("clamps the needle but reports the raw value", () => {
    const over = renderConfidenceGauge(7.5);
    const atMax = renderConfidenceGauge(1.0);
    const needle = (svg: string) => /line x1="([0-9.]+)"/.exec(svg)![1];
    expect(needle(over)).toBe(needle(atMax));  // same pinned position
    expect(over).toContain("7.500");
  });
});

describe("feature band chart", () => {
  it("draws both reference bands and the participant marker", () => {
    const svg = renderFeatureBand("speech_richness", 0.12,
      { healthy_mean: 0.6, healthy_sd: 0.12, ad_mean: 0.45, ad_sd: 0.15 });
    expect(svg).toContain('fill="#3498db"');  // healthy band
    expect(svg).toContain('fill="#c0392b"');  // condition band
    expect(svg).toContain('stroke="#e67e22"');  // participant value
    expect(svg).toContain("speech_richness: 0.120");
  });
});

describe("progress board", () => {
  it("shows five completed rows with score gauges", () => {
    const html = renderProgressBoard(progressFixture(5), false);
    for (let i = 1; i <= 5; i++) {
      expect(html).toContain(`p${i}`);
    }
    expect(html.match(/1 completed/g)).toHaveLength(5);
    expect(html.match(/class="gauge"/g)).toHaveLength(5);
    expect(html.match(/class="band"/g)).toHaveLength(10);  // 2 referenced features x 5
    expect(html).not.toContain("stale-banner");
    expect(html).toContain("completed 5");
  });

  it("renders the stale banner on demand", () => {
    const html = renderProgressBoard(progressFixture(1), true);
    expect(html).toContain("stale-banner");
  });
});

describe("poller", () => {
  it("coalesces ticks while a request is in flight", async () => {
    let release: (() => void) | null = null;
    const fetchProgress = () => new Promise<ReturnType<typeof progressFixture>>(
      (resolve) => { release = () => resolve(progressFixture(1)); });
    const updates: boolean[] = [];
    const poller = new ProgressPoller(fetchProgress,
      (_p, stale) => updates.push(stale), 10_000);

    const first = poller.tick();
    await poller.tick();  // still in flight: must be skipped
    await poller.tick();
    expect(poller.skipped).toBe(2);
    release!();
    await first;
    expect(updates).toEqual([false]);
  });

  it("keeps the last good board and flags staleness on failure", async () => {
    let fail = false;
    const fetchProgress = async () => {
      if (fail) throw new Error("down");
      return progressFixture(2);
    };
    const updates: { n: number; stale: boolean }[] = [];
    const poller = new ProgressPoller(fetchProgress,
      (p, stale) => updates.push({ n: p.participants.length, stale }), 10_000);
    await poller.tick();
    fail = true;
    await poller.tick();
    expect(updates).toEqual([{ n: 2, stale: false }, { n: 2, stale: true }]);
    expect(poller.stale).toBe(true);
    fail = false;
    await poller.tick();
    expect(poller.stale).toBe(false);
  });
});
