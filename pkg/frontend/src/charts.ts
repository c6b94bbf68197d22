// SVG chart rendering: solid polylines for canonical runs, dashed for
// what-if overlays (the dash is semantic: projection, not measurement).

import type { ChartSeries, RunSeries } from './series.js';

const WIDTH = 460;
const HEIGHT = 160;
const PAD = 28;

const RUN_COLORS = ['#2563eb', '#0891b2', '#7c3aed', '#0d9488'];
const OVERLAY_COLORS = ['#dc2626', '#ea580c', '#ca8a04', '#db2777'];

const SVG_NS = 'http://www.w3.org/2000/svg';

function extent(series: RunSeries[]): { t0: number; t1: number } {
  let t0 = Infinity;
  let t1 = -Infinity;
  for (const run of series) {
    for (const p of run.points) {
      if (p.t < t0) t0 = p.t;
      if (p.t > t1) t1 = p.t;
    }
  }
  if (!Number.isFinite(t0)) return { t0: 0, t1: 1 };
  return { t0, t1: t1 > t0 ? t1 : t0 + 1 };
}

function polyline(
  run: RunSeries,
  t0: number,
  t1: number,
  color: string,
  dashed: boolean,
): SVGPolylineElement {
  const node = document.createElementNS(SVG_NS, 'polyline');
  const points = run.points
    .map((p) => {
      const x = PAD + ((p.t - t0) / (t1 - t0)) * (WIDTH - 2 * PAD);
      const y = HEIGHT - PAD - p.v * (HEIGHT - 2 * PAD);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(' ');
  node.setAttribute('points', points);
  node.setAttribute('fill', 'none');
  node.setAttribute('stroke', color);
  node.setAttribute('stroke-width', '1.5');
  if (dashed) node.setAttribute('stroke-dasharray', '6 4');
  return node;
}

export function renderChart(chart: ChartSeries): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute('width', String(WIDTH));
  svg.setAttribute('height', String(HEIGHT));
  svg.setAttribute('role', 'img');
  svg.setAttribute('aria-label', chart.label);

  const allRuns = [...chart.runs, ...chart.overlays.flatMap((o) => o.runs)];
  const { t0, t1 } = extent(allRuns);

  const axis = document.createElementNS(SVG_NS, 'rect');
  axis.setAttribute('x', String(PAD));
  axis.setAttribute('y', String(PAD));
  axis.setAttribute('width', String(WIDTH - 2 * PAD));
  axis.setAttribute('height', String(HEIGHT - 2 * PAD));
  axis.setAttribute('fill', 'none');
  axis.setAttribute('stroke', '#cbd5e1');
  svg.appendChild(axis);

  const title = document.createElementNS(SVG_NS, 'text');
  title.setAttribute('x', String(PAD));
  title.setAttribute('y', '16');
  title.setAttribute('font-size', '12');
  title.setAttribute('fill', '#334155');
  title.textContent = chart.label;
  svg.appendChild(title);

  chart.runs.forEach((run, i) => {
    svg.appendChild(polyline(run, t0, t1, RUN_COLORS[i % RUN_COLORS.length] ?? '#000', false));
  });
  chart.overlays.forEach((overlay, k) => {
    const color = OVERLAY_COLORS[k % OVERLAY_COLORS.length] ?? '#900';
    overlay.runs.forEach((run) => {
      svg.appendChild(polyline(run, t0, t1, color, true));
    });
  });
  return svg;
}
