// SVG renderers for the result drill-down: the confidence gauge and the
// feature-vs-reference band chart. Pure string producers so they are testable
// without a DOM.

import type { ReferenceEntry } from "./types.js";

const GAUGE_W = 320;
const GAUGE_H = 46;

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

// Gauge axis is pinned to [-1, 1] no matter what the data says: -1 reads as
// the highest likelihood of the condition, 1 as the lowest.
export function renderConfidenceGauge(score: number): string {
  const clamped = Math.max(-1, Math.min(1, score));
  const x = ((clamped + 1) / 2) * (GAUGE_W - 20) + 10;
  return `
<svg class="gauge" viewBox="0 0 ${GAUGE_W} ${GAUGE_H}" role="img"
     aria-label="confidence score ${score.toFixed(3)}">
  <defs>
    <linearGradient id="gaugeScale" x1="0" x2="1">
      <stop offset="0%" stop-color="#c0392b"/>
      <stop offset="50%" stop-color="#f4d03f"/>
      <stop offset="100%" stop-color="#27ae60"/>
    </linearGradient>
  </defs>
  <rect x="10" y="18" width="${GAUGE_W - 20}" height="10" rx="5" fill="url(#gaugeScale)"/>
  <line x1="${x}" y1="10" x2="${x}" y2="36" stroke="#2c3e50" stroke-width="3"/>
  <text x="10" y="44" class="axis">-1</text>
  <text x="${GAUGE_W / 2}" y="44" class="axis" text-anchor="middle">0</text>
  <text x="${GAUGE_W - 10}" y="44" class="axis" text-anchor="end">1</text>
  <text x="${GAUGE_W / 2}" y="12" class="value" text-anchor="middle">${score.toFixed(3)}</text>
</svg>`;
}

// Healthy band (blue), condition band (red), participant value (orange line):
// the textual analog of the mobile app's feature distribution graph.
export function renderFeatureBand(name: string, value: number,
                                  reference: ReferenceEntry): string {
  const candidates = [
    value,
    reference.healthy_mean - reference.healthy_sd,
    reference.healthy_mean + reference.healthy_sd,
    reference.ad_mean - reference.ad_sd,
    reference.ad_mean + reference.ad_sd,
  ];
  const lo = Math.min(...candidates);
  const hi = Math.max(...candidates);
  const span = hi - lo || 1;
  const w = 320;
  const sx = (v: number) => 10 + ((v - lo) / span) * (w - 20);
  const band = (mean: number, sd: number) =>
    `x="${Math.min(sx(mean - sd), sx(mean + sd))}" width="${Math.abs(sx(mean + sd) - sx(mean - sd))}"`;
  return `
<svg class="band" viewBox="0 0 ${w} 40" role="img" aria-label="${esc(name)} ${value.toFixed(3)}">
  <rect ${band(reference.healthy_mean, reference.healthy_sd)} y="8" height="10"
        fill="#3498db" opacity="0.45"/>
  <rect ${band(reference.ad_mean, reference.ad_sd)} y="22" height="10"
        fill="#c0392b" opacity="0.45"/>
  <line x1="${sx(value)}" y1="4" x2="${sx(value)}" y2="36" stroke="#e67e22" stroke-width="3"/>
  <text x="10" y="38" class="axis">${esc(name)}: ${value.toFixed(3)}</text>
</svg>`;
}
