// Progress board: per-participant status chips with result drill-down, plus
// the polling loop. Polls coalesce: a tick is skipped while the previous
// request is still in flight, and a failed fetch shows a stale-data banner
// over the last good board instead of wiping it.

import { renderConfidenceGauge, renderFeatureBand } from "./charts.js";
import type { ParticipantProgress, ScoreReport, StudyProgress } from "./types.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function isScoreReport(result: unknown): result is ScoreReport {
  return typeof result === "object" && result !== null && "features" in result;
}

function renderResult(row: ParticipantProgress): string {
  if (!row.latest) return "";
  const parts: string[] = [];
  for (const summary of row.latest.results) {
    const body = summary.result;
    if (!isScoreReport(body)) continue;
    parts.push(`<div class="result-head">${esc(summary.job_name)}</div>`);
    if (typeof body.confidence_score === "number") {
      parts.push(renderConfidenceGauge(body.confidence_score));
    }
    if (typeof body.mmse_estimate === "number") {
      parts.push(`<div class="score">mental-state estimate: ${body.mmse_estimate}/30</div>`);
    }
    if (typeof body.onset_probability === "number") {
      parts.push(`<div class="score">onset probability: ` +
        `${body.onset_probability.toFixed(3)}` +
        `${body.onset_before_85 ? " (before 85)" : ""}</div>`);
    }
    const reference = body.feature_reference ?? {};
    for (const [name, value] of Object.entries(body.features ?? {})) {
      const entry = reference[name];
      if (entry && typeof value === "number") {
        parts.push(renderFeatureBand(name, value, entry));
      }
    }
  }
  if (parts.length === 0) return "";
  return `<details class="drill-down"><summary>latest results</summary>
    ${parts.join("\n")}</details>`;
}

export function renderProgressBoard(progress: StudyProgress, stale: boolean): string {
  const banner = stale
    ? `<div class="stale-banner">showing stale data: last refresh failed</div>`
    : "";
  const rows = progress.participants.map((row) => `
    <tr>
      <td>${esc(row.participant_id)}</td>
      <td><span class="chip done">${row.completed} completed</span>
          <span class="chip pending">${row.pending} pending</span>
          <span class="chip expired">${row.expired} expired</span></td>
      <td>${renderResult(row)}</td>
    </tr>`).join("");
  return `
  <section class="progress">
    <h2>${esc(progress.study_id)} <span class="status">${esc(progress.status)}</span></h2>
    ${banner}
    <table>
      <thead><tr><th>participant</th><th>status</th><th>results</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <div class="totals">completed ${progress.totals.completed} ·
      pending ${progress.totals.pending} · expired ${progress.totals.expired}</div>
  </section>`;
}

export class ProgressPoller {
  private inFlight = false;
  private timer: ReturnType<typeof setInterval> | null = null;
  lastGood: StudyProgress | null = null;
  stale = false;
  ticks = 0;
  skipped = 0;

  constructor(private fetchProgress: () => Promise<StudyProgress>,
              private onUpdate: (progress: StudyProgress, stale: boolean) => void,
              private intervalMs: number) {}

  async tick(): Promise<void> {
    this.ticks += 1;
    if (this.inFlight) {
      this.skipped += 1;  // coalesce: never stack requests
      return;
    }
    this.inFlight = true;
    try {
      const progress = await this.fetchProgress();
      this.lastGood = progress;
      this.stale = false;
      this.onUpdate(progress, false);
    } catch {
      this.stale = true;
      if (this.lastGood) {
        this.onUpdate(this.lastGood, true);
      }
    } finally {
      this.inFlight = false;
    }
  }

  start(): void {
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
