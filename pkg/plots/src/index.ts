export * from "./csv.js";
export * from "./svg.js";
export * from "./figures.js";
export { CliError, main, parseArgs, renderAll, renderKind } from "./cli.js";
