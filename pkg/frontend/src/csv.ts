import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class CsvError extends Error {}

export interface CsvTable {
  columns: string[];
  rows: Record<string, string>[];
}

/** Parse a CSV file into string cells keyed by header name. Raw cell text is
 * preserved so downstream consumers can echo values without reformatting. */
export function loadCsv(path: string): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new CsvError(`cannot read CSV file '${path}': ${(err as Error).message}`);
  }
  if (text.trim() === "") {
    throw new CsvError(`empty CSV '${path}': no data rows`);
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new CsvError(`malformed CSV '${path}': ${e.message} (row ${e.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0 || parsed.data.length === 0) {
    throw new CsvError(`empty CSV '${path}': no data rows`);
  }
  return { columns, rows: parsed.data };
}

export function requireColumns(table: CsvTable, needed: string[], path: string): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new CsvError(
      `CSV '${path}' is missing required column(s): ${missing.join(", ")} ` +
        `(found: ${table.columns.join(", ")})`
    );
  }
}

export function numericCell(row: Record<string, string>, column: string, path: string): number {
  const raw = row[column];
  const value = Number(raw);
  if (raw === undefined || raw === "" || !Number.isFinite(value)) {
    throw new CsvError(`CSV '${path}': non-numeric value '${raw}' in column '${column}'`);
  }
  return value;
}
