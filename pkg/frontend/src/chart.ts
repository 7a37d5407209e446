/** Pure chart math: metric series -> SVG polyline coordinates.
 *
 * Numbers are parsed here for geometry only; tick and point labels reuse the
 * exact serialized strings from the reports.
 */

import type { MetricKey, Report } from "./api.js";

export interface SeriesPoint {
  k: number;
  /** exact serialized decimal, used for labels */
  raw: string;
  value: number;
}

export function buildSeries(reports: Report[], key: MetricKey): SeriesPoint[] {
  return reports.map((report) => ({
    k: report.K,
    raw: report.metrics[key],
    value: Number(report.metrics[key]),
  }));
}

export interface ChartGeometry {
  /** "x,y" pairs joined by spaces, ready for an SVG <polyline> */
  polyline: string;
  /** scaled coordinates, same order as the input series */
  coords: Array<[number, number]>;
  /** index of the latest K (highlighted) */
  highlight: number;
  yMin: number;
  yMax: number;
}

export function layoutSeries(
  series: SeriesPoint[],
  width: number,
  height: number,
  pad = 10,
): ChartGeometry {
  if (series.length === 0) {
    throw new Error("empty series");
  }
  const ks = series.map((p) => p.k);
  const values = series.map((p) => p.value);
  const kMin = Math.min(...ks);
  const kMax = Math.max(...ks);
  let yMin = Math.min(...values);
  let yMax = Math.max(...values);
  if (yMin === yMax) {
    // flat series: center it
    yMin -= 0.5;
    yMax += 0.5;
  }
  const sx = (k: number) =>
    kMax === kMin ? width / 2 : pad + ((k - kMin) / (kMax - kMin)) * (width - 2 * pad);
  const sy = (v: number) => height - pad - ((v - yMin) / (yMax - yMin)) * (height - 2 * pad);
  const coords = series.map((p) => [sx(p.k), sy(p.value)] as [number, number]);
  return {
    polyline: coords.map(([x, y]) => `${x},${y}`).join(" "),
    coords,
    highlight: series.length - 1,
    yMin,
    yMax,
  };
}

export function scatterLayout(
  points: Array<[number, number]>,
  labels: number[],
  width: number,
  height: number,
  pad = 10,
): Array<{ x: number; y: number; label: number }> {
  if (points.length !== labels.length) {
    throw new Error("points and labels differ in length");
  }
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x: number) => (x1 === x0 ? width / 2 : pad + ((x - x0) / (x1 - x0)) * (width - 2 * pad));
  const sy = (y: number) => (y1 === y0 ? height / 2 : height - pad - ((y - y0) / (y1 - y0)) * (height - 2 * pad));
  return points.map(([x, y], i) => ({ x: sx(x), y: sy(y), label: labels[i] }));
}
