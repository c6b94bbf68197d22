// Chart-series assembly: per-run time series for each monitored perspective,
// with what-if projections kept as overlays that never replace the canonical
// series.

import type { Snapshot, TrajectoryWire } from './types.js';

export type PerspectiveKey = 'serviceAvailability' | 'cyberRisk' | 'healthyFraction';

export const PERSPECTIVES: { key: PerspectiveKey; label: string }[] = [
  { key: 'healthyFraction', label: 'Network situation (healthy fraction)' },
  { key: 'serviceAvailability', label: 'Service availability' },
  { key: 'cyberRisk', label: 'Cyber risk posture' },
];

export interface SeriesPoint {
  t: number;
  v: number;
}

export interface RunSeries {
  runId: number;
  points: SeriesPoint[];
}

export interface OverlaySeries {
  label: string;
  coaId: string | null;
  runs: RunSeries[];
  pinned: boolean;
}

export interface ChartSeries {
  perspective: PerspectiveKey;
  label: string;
  runs: RunSeries[];          // canonical, one entry per simulation run
  overlays: OverlaySeries[];  // what-if projections, rendered dashed
}

function valueOf(snapshot: Snapshot, key: PerspectiveKey): number {
  if (key === 'healthyFraction') {
    return snapshot.networkSituation.healthyFraction;
  }
  return snapshot[key];
}

export function runSeries(trajectory: TrajectoryWire, key: PerspectiveKey): RunSeries {
  return {
    runId: trajectory.runId,
    points: trajectory.samples.map((s) => ({ t: s.time, v: valueOf(s, key) })),
  };
}

export function buildChartSeries(trajectories: TrajectoryWire[]): ChartSeries[] {
  return PERSPECTIVES.map(({ key, label }) => ({
    perspective: key,
    label,
    runs: trajectories.map((t) => runSeries(t, key)),
    overlays: [],
  }));
}

export function addOverlay(
  charts: ChartSeries[],
  label: string,
  coaId: string | null,
  trajectories: TrajectoryWire[],
): ChartSeries[] {
  return charts.map((chart) => ({
    ...chart,
    overlays: [
      ...chart.overlays,
      {
        label,
        coaId,
        pinned: false,
        runs: trajectories.map((t) => runSeries(t, chart.perspective)),
      },
    ],
  }));
}

export function discardOverlay(charts: ChartSeries[], label: string): ChartSeries[] {
  return charts.map((chart) => ({
    ...chart,
    overlays: chart.overlays.filter((o) => o.label !== label),
  }));
}

export function pinOverlay(charts: ChartSeries[], label: string): ChartSeries[] {
  return charts.map((chart) => ({
    ...chart,
    overlays: chart.overlays.map((o) => (o.label === label ? { ...o, pinned: true } : o)),
  }));
}

/** Pointwise equality of two run-series sets (same times, same values). */
export function seriesEqual(a: RunSeries[], b: RunSeries[]): boolean {
  if (a.length !== b.length) return false;
  return a.every((runA, i) => {
    const runB = b[i];
    if (runB === undefined || runA.points.length !== runB.points.length) return false;
    return runA.points.every((p, k) => {
      const q = runB.points[k];
      return q !== undefined && p.t === q.t && p.v === q.v;
    });
  });
}
