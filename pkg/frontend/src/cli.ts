#!/usr/bin/env node
/**
 * render --figure ID --csv PATHS... [--rate F] [--fit-window A B]
 *        [--fit-field NAME] [--fit-peaks] --out PATH
 *
 * Reads simulator diagnostics CSVs and emits a PNG figure. A JSON report
 * (including any fit computed from the data) is printed to stdout so other
 * tools can compare against the simulator's own fits.
 */

import { FIGURE_IDS, renderFigure, type FigureId, type FigureSpec } from "./figures.js";

function usage(): never {
  process.stderr.write(
    "usage: render --figure ID --csv PATH... [--rate F] " +
      "[--fit-window A B] [--fit-field e1_energy|e2_energy|b_energy] " +
      "[--fit-peaks] --out PATH\n" +
      `figure ids: ${FIGURE_IDS.join(", ")}\n`,
  );
  process.exit(1);
}

export function parseArgs(argv: string[]): FigureSpec {
  if (argv[0] === "render") {
    argv = argv.slice(1);
  }
  let figureId: string | undefined;
  const csvPaths: string[] = [];
  let outputPath: string | undefined;
  let analyticRate: number | undefined;
  let fitWindow: [number, number] | undefined;
  let fitField: FigureSpec["fitField"];
  let fitPeaks = false;

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    switch (arg) {
      case "--figure":
        figureId = argv[++i];
        break;
      case "--csv":
        while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
          csvPaths.push(argv[++i]);
        }
        break;
      case "--rate":
        analyticRate = Number(argv[++i]);
        break;
      case "--fit-window":
        fitWindow = [Number(argv[++i]), Number(argv[++i])];
        break;
      case "--fit-field":
        fitField = argv[++i] as FigureSpec["fitField"];
        break;
      case "--fit-peaks":
        fitPeaks = true;
        break;
      case "--out":
        outputPath = argv[++i];
        break;
      default:
        throw new Error(`unknown argument ${arg}`);
    }
  }
  if (!figureId || !(FIGURE_IDS as readonly string[]).includes(figureId)) {
    throw new Error(`--figure must be one of ${FIGURE_IDS.join(", ")}`);
  }
  if (csvPaths.length === 0 || !outputPath) {
    throw new Error("--csv and --out are required");
  }
  return {
    figureId: figureId as FigureId,
    csvPaths,
    outputPath,
    analyticRate,
    fitWindow,
    fitField,
    fitPeaks,
  };
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`render: ${(err as Error).message}\n`);
    usage();
  }
  try {
    const report = renderFigure(spec);
    process.stdout.write(JSON.stringify(report) + "\n");
  } catch (err) {
    process.stderr.write(`render: ${(err as Error).message}\n`);
    return 2;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
