import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { CsvError, loadCsv } from "../src/csv.js";
import { FIGURE_KINDS, FigureKind, extractFigure, makeSpec } from "../src/figures.js";
import { ImageManifest, manifestPath, renderSvg, writeFigure } from "../src/render.js";
import { runPlot } from "../src/cli.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");
const KIND_INPUT: Record<FigureKind, string> = {
  "im-spread": join(FIXTURES, "im.csv"),
  "im-runtime": join(FIXTURES, "im.csv"),
  "mintss-seeds": join(FIXTURES, "mintss.csv"),
  "mintss-runtime": join(FIXTURES, "mintss.csv"),
  bounds: join(FIXTURES, "bounds.csv"),
};

const tmp = () => mkdtempSync(join(tmpdir(), "figplots-"));

function readManifest(imagePath: string): ImageManifest {
  return JSON.parse(readFileSync(manifestPath(imagePath), "utf8"));
}

function csvColumn(path: string, column: string): number[] {
  const table = loadCsv(path);
  return table.rows.map((r) => Number(r[column]));
}

describe("every figure kind renders with a faithful manifest", () => {
  for (const kind of FIGURE_KINDS) {
    it(`${kind}: SVG + manifest, points equal CSV values exactly`, () => {
      const dir = tmp();
      const out = join(dir, `${kind}.svg`);
      runPlot(kind, KIND_INPUT[kind], out);

      const svg = readFileSync(out, "utf8");
      expect(svg).toContain("<svg");
      expect(svg).toContain("<polyline");

      const manifest = readManifest(out);
      expect(manifest.kind).toBe(kind);
      expect(manifest.series.length).toBeGreaterThanOrEqual(2);

      // every manifest point must appear verbatim in the CSV, column for column
      const table = loadCsv(KIND_INPUT[kind]);
      const yCol: Record<string, [string, string]> = {
        "im-spread": ["k", "f_avg"],
        "im-runtime": ["k", "wall_time"],
        "mintss-seeds": ["q_fraction", "c_avg"],
        "mintss-runtime": ["q_fraction", "wall_time"],
      };
      if (kind === "bounds") {
        const byName = Object.fromEntries(manifest.series.map((s) => [s.name, s.points]));
        expect(byName["adaptive"].map((p) => p.y)).toEqual(
          csvColumn(KIND_INPUT[kind], "n_ga_over_oa")
        );
        expect(byName["non-adaptive"].map((p) => p.y)).toEqual(
          csvColumn(KIND_INPUT[kind], "n_gna_over_oa")
        );
      } else {
        const [xc, yc] = yCol[kind];
        const csvPairs = new Set(table.rows.map((r) => `${Number(r[xc])}|${Number(r[yc])}`));
        const manifestPoints = manifest.series.flatMap((s) => s.points);
        expect(manifestPoints.length).toBe(table.rows.length);
        for (const p of manifestPoints) {
          expect(csvPairs.has(`${p.x}|${p.y}`)).toBe(true);
        }
      }

      // legend labels come from the policy column
      if (kind !== "bounds") {
        const policies = new Set(table.rows.map((r) => r.policy));
        for (const s of manifest.series) {
          expect([...policies].some((p) => s.name === p || s.name.startsWith(`${p} (b=`))).toBe(
            true
          );
          expect(svg).toContain(`>${s.name}</text>`);
        }
      }
    });
  }
});

describe("bounds figure ordering", () => {
  it("adaptive curve sits below the non-adaptive curve for Q >= 20", () => {
    const dir = tmp();
    const out = join(dir, "bounds.svg");
    runPlot("bounds", KIND_INPUT.bounds, out);
    const manifest = readManifest(out);
    const adaptive = manifest.series.find((s) => s.name === "adaptive")!;
    const nonAdaptive = manifest.series.find((s) => s.name === "non-adaptive")!;
    const naByX = new Map(nonAdaptive.points.map((p) => [p.x, p.y]));
    const checked = adaptive.points.filter((p) => p.x >= 20);
    expect(checked.length).toBeGreaterThan(0);
    for (const p of checked) {
      expect(p.y).toBeLessThan(naByX.get(p.x)!);
    }
  });
});

describe("error handling", () => {
  it("empty CSV raises an explicit error", () => {
    const dir = tmp();
    const path = join(dir, "empty.csv");
    writeFileSync(path, "");
    expect(() => runPlot("im-spread", path, join(dir, "x.svg"))).toThrow(CsvError);
    expect(() => runPlot("im-spread", path, join(dir, "x.svg"))).toThrow(/empty CSV/);
  });

  it("header-only CSV raises an explicit error", () => {
    const dir = tmp();
    const path = join(dir, "headeronly.csv");
    writeFileSync(path, "policy,k,f_avg\n");
    expect(() => runPlot("im-spread", path, join(dir, "x.svg"))).toThrow(/empty CSV/);
  });

  it("missing columns raise an error naming them", () => {
    const dir = tmp();
    const path = join(dir, "missing.csv");
    writeFileSync(path, "policy,k\nadaptive,1\n");
    expect(() => runPlot("im-spread", path, join(dir, "x.svg"))).toThrow(/f_avg/);
  });

  it("non-numeric cells raise an error naming the column", () => {
    const dir = tmp();
    const path = join(dir, "nan.csv");
    writeFileSync(path, "policy,k,f_avg\nadaptive,1,oops\n");
    expect(() => runPlot("im-spread", path, join(dir, "x.svg"))).toThrow(/f_avg/);
  });
});

describe("small inputs", () => {
  it("two-row CSV renders a two-point line", () => {
    const dir = tmp();
    const path = join(dir, "two.csv");
    writeFileSync(path, "policy,k,f_avg\nadaptive,1,3.5\nadaptive,5,9.25\n");
    const out = join(dir, "two.svg");
    runPlot("im-spread", path, out);
    const manifest = readManifest(out);
    expect(manifest.series).toHaveLength(1);
    expect(manifest.series[0].points).toEqual([
      { x: 1, y: 3.5 },
      { x: 5, y: 9.25 },
    ]);
    const svg = readFileSync(out, "utf8");
    const polyline = svg.match(/<polyline points="([^"]+)"/)![1];
    expect(polyline.split(" ")).toHaveLength(2);
  });

  it("single-point series renders a marker without a line", () => {
    const spec = makeSpec("im-spread", "inline.csv", "out.svg");
    const fig = {
      spec,
      series: [{ name: "adaptive", points: [{ x: 2, y: 4 }] }],
    };
    const svg = renderSvg(fig);
    expect(svg).toContain("<circle");
    expect(svg).not.toContain("<polyline");
  });

  it("constant-y series still renders (degenerate scale padded)", () => {
    const dir = tmp();
    const path = join(dir, "flat.csv");
    writeFileSync(path, "policy,k,f_avg\nadaptive,1,2\nadaptive,3,2\n");
    const out = join(dir, "flat.svg");
    runPlot("im-spread", path, out);
    expect(readFileSync(out, "utf8")).not.toContain("NaN");
  });
});

describe("manifest is a pure view of the CSV", () => {
  it("writeFigure never alters point values", () => {
    const dir = tmp();
    const spec = makeSpec("bounds", KIND_INPUT.bounds, join(dir, "b.svg"));
    const fig = extractFigure(spec, loadCsv(KIND_INPUT.bounds));
    const before = JSON.stringify(fig.series);
    writeFigure(fig);
    expect(JSON.stringify(fig.series)).toBe(before);
    const manifest = readManifest(spec.output);
    expect(JSON.stringify(manifest.series)).toBe(before);
  });
});
