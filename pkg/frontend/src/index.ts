export { CsvError, loadCsv, requireColumns, numericCell } from "./csv.js";
export {
  FIGURE_KINDS,
  extractFigure,
  makeSpec,
} from "./figures.js";
export type { FigureKind, FigureSpec, FigureData, Series, Point } from "./figures.js";
export { buildManifest, manifestPath, renderSvg, writeFigure } from "./render.js";
export type { ImageManifest } from "./render.js";
export { main, runPlot } from "./cli.js";
