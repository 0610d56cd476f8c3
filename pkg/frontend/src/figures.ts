import { CsvTable, numericCell, requireColumns } from "./csv.js";

export type FigureKind =
  | "im-spread"
  | "im-runtime"
  | "mintss-seeds"
  | "mintss-runtime"
  | "bounds";

export const FIGURE_KINDS: FigureKind[] = [
  "im-spread",
  "im-runtime",
  "mintss-seeds",
  "mintss-runtime",
  "bounds",
];

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  xLabel: string;
  yLabel: string;
  title: string;
}

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  name: string;
  points: Point[];
}

export interface FigureData {
  spec: FigureSpec;
  series: Series[];
}

interface KindDef {
  xLabel: string;
  yLabel: string;
  title: string;
  columns: string[];
  extract: (table: CsvTable, path: string) => Series[];
}

/** Group rows into one series per policy, x/y taken verbatim from columns.
 * If one policy appears with several batch sizes, the batch size is folded
 * into the series name so lines stay functions of x. */
function policySeries(
  table: CsvTable,
  path: string,
  xCol: string,
  yCol: string
): Series[] {
  const hasB = table.columns.includes("b");
  const policies = [...new Set(table.rows.map((r) => r.policy))];
  const multiBatch = new Set(
    policies.filter(
      (p) =>
        hasB &&
        new Set(table.rows.filter((r) => r.policy === p).map((r) => r.b)).size > 1
    )
  );
  const bySeries = new Map<string, Point[]>();
  for (const row of table.rows) {
    const name = multiBatch.has(row.policy) ? `${row.policy} (b=${row.b})` : row.policy;
    const pts = bySeries.get(name) ?? [];
    pts.push({ x: numericCell(row, xCol, path), y: numericCell(row, yCol, path) });
    bySeries.set(name, pts);
  }
  return [...bySeries.entries()].map(([name, points]) => ({
    name,
    points: points.slice().sort((a, b) => a.x - b.x),
  }));
}

function boundsSeries(table: CsvTable, path: string): Series[] {
  const curve = (name: string, col: string): Series => ({
    name,
    points: table.rows
      .map((r) => ({ x: numericCell(r, "Q", path), y: numericCell(r, col, path) }))
      .sort((a, b) => a.x - b.x),
  });
  return [curve("adaptive", "n_ga_over_oa"), curve("non-adaptive", "n_gna_over_oa")];
}

const KIND_DEFS: Record<FigureKind, KindDef> = {
  "im-spread": {
    xLabel: "number of seeds k",
    yLabel: "average spread",
    title: "Average spread vs number of seeds",
    columns: ["policy", "k", "f_avg"],
    extract: (t, p) => policySeries(t, p, "k", "f_avg"),
  },
  "im-runtime": {
    xLabel: "number of seeds k",
    yLabel: "runtime (s)",
    title: "Runtime vs number of seeds",
    columns: ["policy", "k", "wall_time"],
    extract: (t, p) => policySeries(t, p, "k", "wall_time"),
  },
  "mintss-seeds": {
    xLabel: "target fraction",
    yLabel: "seeds required",
    title: "Seeds required vs target fraction",
    columns: ["policy", "q_fraction", "c_avg"],
    extract: (t, p) => policySeries(t, p, "q_fraction", "c_avg"),
  },
  "mintss-runtime": {
    xLabel: "target fraction",
    yLabel: "runtime (s)",
    title: "Runtime vs target fraction",
    columns: ["policy", "q_fraction", "wall_time"],
    extract: (t, p) => policySeries(t, p, "q_fraction", "wall_time"),
  },
  bounds: {
    xLabel: "target spread Q",
    yLabel: "seed bound / optimum",
    title: "Theoretical seed-count bounds",
    columns: ["Q", "n_ga_over_oa", "n_gna_over_oa"],
    extract: boundsSeries,
  },
};

export function makeSpec(kind: FigureKind, input: string, output: string): FigureSpec {
  const def = KIND_DEFS[kind];
  return { kind, input, output, xLabel: def.xLabel, yLabel: def.yLabel, title: def.title };
}

/** Pure view of the CSV: points are read verbatim, never recomputed. */
export function extractFigure(spec: FigureSpec, table: CsvTable): FigureData {
  const def = KIND_DEFS[spec.kind];
  requireColumns(table, def.columns, spec.input);
  return { spec, series: def.extract(table, spec.input) };
}
