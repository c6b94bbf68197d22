// Console acceptance against a live orchestrator: spawns the Python service,
// walks one full 5-event exercise through the view-model, and checks the
// step-label mirror, the no-action what-if identity, and client-side survey
// gating.

import { ChildProcess, spawn } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { OrchestratorClient } from '../src/api.js';
import { seriesEqual, buildChartSeries } from '../src/series.js';
import { subscribeStream } from '../src/sse.js';
import type { SessionView, StreamRecord } from '../src/types.js';
import { ConsoleViewModel, SurveyNotValidError } from '../src/viewmodel.js';

const PORT = 18000 + Math.floor(Math.random() * 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForHealth(timeoutMs = 60_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error('orchestrator did not come up');
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

beforeAll(async () => {
  const store = mkdtempSync(join(tmpdir(), 'marittx-console-'));
  server = spawn(
    'python3',
    ['-m', 'marittx.session.cli', 'serve', '--port', String(PORT), '--store', store],
    { env: { ...process.env, MARITTX_BACKEND: 'numpy' }, stdio: 'ignore' },
  );
  await waitForHealth();
}, 90_000);

afterAll(() => {
  server?.kill('SIGTERM');
});

describe('facilitator console against a live orchestrator', () => {
  it('walks a full 5-event exercise mirroring the server step labels', async () => {
    const raw = new OrchestratorClient(BASE); // independent reader for ground truth
    const vm = new ConsoleViewModel(new OrchestratorClient(BASE));
    await vm.createSession('maersk-notpetya-12', { np: 10, no: 0, gs: '3-4' }, 'console-walk');

    const assertMirror = async () => {
      const truth: SessionView = await raw.getSession('console-walk');
      const expected = truth.currentEvent !== null ? truth.currentEvent.step : truth.phase;
      expect(vm.stepLabel()).toBe(expected);
    };
    await assertMirror();

    let noActionChecked = false;
    await vm.advanceStep(); // BEGIN_EXECUTION -> event 1 PRESENTATION
    await assertMirror();

    for (let event = 1; event <= 5; event += 1) {
      expect(vm.view?.currentEvent?.event).toBe(event);
      expect(vm.stepLabel()).toBe('PRESENTATION');

      await vm.advanceStep(); // MODEL_APPLICATION: runs attach, charts build
      await assertMirror();
      expect(vm.charts).toHaveLength(3);
      for (const chart of vm.charts) {
        expect(chart.runs).toHaveLength(3); // series count = s per perspective
      }

      await vm.advanceStep(); // INTERPRETATION
      await assertMirror();
      await vm.advanceStep(); // DISCUSSION
      await assertMirror();
      expect(vm.whatIfEnabled()).toBe(true);

      const courses = vm.view?.currentEvent?.courses ?? [];
      const noAction = courses.find(
        (c) => Object.keys(c.paramDeltas).length === 0 && c.leadTime === 0,
      );
      if (noAction !== undefined && !noActionChecked) {
        // "no action" overlay must coincide pointwise with plain continuation
        const baseline = await vm.runWhatIf(null, 12.0);
        const projected = await vm.runWhatIf(noAction.id, 12.0);
        const baseCharts = buildChartSeries(baseline.trajectories);
        const coaCharts = buildChartSeries(projected.trajectories);
        for (let k = 0; k < baseCharts.length; k += 1) {
          expect(seriesEqual(baseCharts[k]!.runs, coaCharts[k]!.runs)).toBe(true);
        }
        expect(projected.score.score).toBe(baseline.score.score);
        // overlays never replace the canonical series
        for (const chart of vm.charts) {
          expect(chart.runs).toHaveLength(3);
          expect(chart.overlays.length).toBeGreaterThan(0);
        }
        noActionChecked = true;
      }

      const firstCourse = courses[0];
      if (firstCourse !== undefined) {
        await vm.submitCourse(firstCourse.id);
        expect(vm.view?.currentEvent?.chosenCourse).toBe(firstCourse.id);
      }
      await vm.advanceStep(); // CONCLUSIONS
      await assertMirror();
      await vm.advanceStep(); // conclude; next PRESENTATION or awaiting closure
      await assertMirror();
    }
    expect(noActionChecked).toBe(true);

    expect(vm.nextAction()).toBe('BEGIN_CLOSURE');
    await vm.advanceStep();
    expect(vm.view?.phase).toBe('CLOSURE');
    expect(vm.view?.concludedEvents).toBe(5);

    // -- survey gating: out-of-range never leaves the form --------------------
    vm.setSurveyValue('Y', 5);
    for (let i = 1; i <= 4; i += 1) vm.setSurveyValue(`X${i}` as 'X1', i % 2);
    for (let i = 5; i <= 18; i += 1) vm.setSurveyValue(`X${i}` as 'X5', 4);
    vm.setSurveyValue('X19', 'integration note');

    vm.setSurveyValue('X2', 3); // binary violation
    await expect(vm.submitSurveyRow()).rejects.toThrow(SurveyNotValidError);
    vm.setSurveyValue('X2', 1);
    vm.setSurveyValue('X11', 6); // range violation
    await expect(vm.submitSurveyRow()).rejects.toThrow(SurveyNotValidError);
    let truth = await raw.getSession('console-walk');
    expect(truth.surveyCount).toBe(0); // nothing reached the server

    vm.setSurveyValue('X11', 3);
    const accepted = await vm.submitSurveyRow();
    expect(accepted).toEqual({ accepted: 1, total: 1 });
    truth = await raw.getSession('console-walk');
    expect(truth.surveyCount).toBe(1);
  }, 120_000);

  it('streams snapshots in order and resumes without duplication', async () => {
    const vm = new ConsoleViewModel(new OrchestratorClient(BASE));
    await vm.createSession('maersk-notpetya-12', { np: 10, no: 0, gs: '3-4' }, 'console-stream');
    await vm.advanceStep(); // BEGIN_EXECUTION
    await vm.advanceStep(); // MODEL_APPLICATION publishes snapshots

    const firstBatch = subscribeStream<StreamRecord>(
      BASE, 'console-stream', (record) => vm.ingestStreamRecord(record), { limit: 40 },
    );
    await firstBatch.done;
    expect(vm.streamLog.length).toBe(40);

    // Reconnect from the last seen sequence number; no duplicates may appear.
    const resumed = subscribeStream<StreamRecord>(
      BASE, 'console-stream', (record) => vm.ingestStreamRecord(record),
      { after: vm.streamSeq, limit: 40 },
    );
    await resumed.done;
    const seqs = vm.streamLog.map((r) => r.seq);
    expect(seqs).toEqual(Array.from({ length: 80 }, (_, i) => i + 1));
    expect(new Set(seqs).size).toBe(80);
  }, 60_000);
});
