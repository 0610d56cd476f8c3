import { writeFileSync } from "node:fs";
import { FigureData, Series } from "./figures.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 160, bottom: 56, left: 72 };

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

export interface ImageManifest {
  kind: string;
  title: string;
  xLabel: string;
  yLabel: string;
  series: { name: string; points: { x: number; y: number }[] }[];
}

function extent(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    // degenerate range: pad so the scale stays invertible
    lo -= 1;
    hi += 1;
  }
  return [lo, hi];
}

function linearScale([d0, d1]: [number, number], [r0, r1]: [number, number]) {
  return (v: number) => r0 + ((v - d0) / (d1 - d0)) * (r1 - r0);
}

function ticks([lo, hi]: [number, number], count = 6): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / (count * step);
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let t = Math.ceil(lo / s) * s; t <= hi + s * 1e-9; t += s) out.push(+t.toPrecision(12));
  return out;
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function renderSvg(fig: FigureData): string {
  const allPts = fig.series.flatMap((s) => s.points);
  const xDom = extent(allPts.map((p) => p.x));
  const yDom = extent(allPts.map((p) => p.y));
  const x = linearScale(xDom, [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale(yDom, [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(fig.spec.title)}</text>`
  );

  // axes with ticks and grid lines
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  for (const t of ticks(xDom)) {
    const px = x(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#eee"/>`);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(`<text x="${px}" y="${y0 + 18}" text-anchor="middle">${t}</text>`);
  }
  for (const t of ticks(yDom)) {
    const py = y(t);
    parts.push(`<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#eee"/>`);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py + 4}" text-anchor="end">${t}</text>`);
  }
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle">${esc(fig.spec.xLabel)}</text>`
  );
  parts.push(
    `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(fig.spec.yLabel)}</text>`
  );

  fig.series.forEach((s: Series, i: number) => {
    const color = PALETTE[i % PALETTE.length];
    const coords = s.points.map((p) => `${x(p.x).toFixed(2)},${y(p.y).toFixed(2)}`);
    if (coords.length > 1) {
      parts.push(
        `<polyline points="${coords.join(" ")}" fill="none" stroke="${color}" stroke-width="2"/>`
      );
    }
    for (const p of s.points) {
      parts.push(
        `<circle cx="${x(p.x).toFixed(2)}" cy="${y(p.y).toFixed(2)}" r="3.5" fill="${color}"/>`
      );
    }
    // legend entry
    const ly = MARGIN.top + 8 + i * 20;
    parts.push(
      `<line x1="${x1 + 12}" y1="${ly}" x2="${x1 + 36}" y2="${ly}" stroke="${color}" stroke-width="2"/>`
    );
    parts.push(`<text x="${x1 + 42}" y="${ly + 4}">${esc(s.name)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}

export function buildManifest(fig: FigureData): ImageManifest {
  return {
    kind: fig.spec.kind,
    title: fig.spec.title,
    xLabel: fig.spec.xLabel,
    yLabel: fig.spec.yLabel,
    series: fig.series.map((s) => ({
      name: s.name,
      points: s.points.map((p) => ({ x: p.x, y: p.y })),
    })),
  };
}

export function manifestPath(imagePath: string): string {
  return imagePath.replace(/\.svg$/i, "") + ".manifest.json";
}

/** Write the SVG image and its sidecar manifest; returns the manifest path. */
export function writeFigure(fig: FigureData): string {
  writeFileSync(fig.spec.output, renderSvg(fig) + "\n");
  const mp = manifestPath(fig.spec.output);
  writeFileSync(mp, JSON.stringify(buildManifest(fig), null, 2) + "\n");
  return mp;
}
