#!/usr/bin/env node
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";
import { CsvError, loadCsv } from "./csv.js";
import { FIGURE_KINDS, FigureKind, extractFigure, makeSpec } from "./figures.js";
import { writeFigure } from "./render.js";

const USAGE = `usage: figure-plots plot --kind <kind> --in <csv> --out <svg>

kinds: ${FIGURE_KINDS.join(", ")}

Renders one figure from an experiment CSV and writes a machine-readable
image manifest (<out basename>.manifest.json) next to the SVG.`;

export function runPlot(kind: FigureKind, input: string, output: string): string {
  const spec = makeSpec(kind, input, output);
  const table = loadCsv(input);
  const fig = extractFigure(spec, table);
  return writeFigure(fig);
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  if (parsed.values.help) {
    console.log(USAGE);
    return 0;
  }
  if (parsed.positionals.length !== 1 || parsed.positionals[0] !== "plot") {
    console.error(`error: expected the 'plot' subcommand\n${USAGE}`);
    return 2;
  }
  const { kind, in: input, out: output } = parsed.values;
  if (!kind || !input || !output) {
    console.error(`error: --kind, --in, and --out are all required\n${USAGE}`);
    return 2;
  }
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    console.error(`error: unknown kind '${kind}' (choose from ${FIGURE_KINDS.join(", ")})`);
    return 2;
  }
  try {
    const manifest = runPlot(kind as FigureKind, input, output);
    console.log(`wrote ${output} and ${manifest}`);
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  return 0;
}

const isDirectRun =
  process.argv[1] !== undefined && fileURLToPath(import.meta.url) === process.argv[1];
if (isDirectRun) {
  process.exitCode = main(process.argv.slice(2));
}
