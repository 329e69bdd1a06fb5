#!/usr/bin/env node
// plots <kind> --in CSV [--field NAME] --out SVG

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { FIGURE_KINDS, FigureKind } from "./figures";
import { renderSvg } from "./render";

const USAGE = `usage: plots <${FIGURE_KINDS.join("|")}> --in CSV [--field NAME] --out SVG

Renders one figure from a solver CSV artifact:
  node_types     nodes.csv colored by node kind
  field_scatter  solution.csv colored by --field (u_im, eps_an, eps_imex)
  error_pair     solution.csv, stacked eps_an / eps_imex panels
  line_plot      line.csv, the three normalized curves
`;

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        field: { type: "string" },
        out: { type: "string" },
        width: { type: "string" },
        height: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (error) {
    process.stderr.write(`error: ${(error as Error).message}\n${USAGE}`);
    return 2;
  }
  if (parsed.values.help) {
    process.stdout.write(USAGE);
    return 0;
  }

  const kind = parsed.positionals[0] as FigureKind | undefined;
  if (!kind || !FIGURE_KINDS.includes(kind)) {
    process.stderr.write(`error: expected a figure kind\n${USAGE}`);
    return 2;
  }
  const input = parsed.values.in;
  const output = parsed.values.out;
  if (!input || !output) {
    process.stderr.write(`error: --in and --out are required\n${USAGE}`);
    return 2;
  }

  try {
    const csvText = readFileSync(input, "utf8");
    const svg = renderSvg(
      kind,
      csvText,
      parsed.values.field,
      {
        width: parsed.values.width ? Number(parsed.values.width) : undefined,
        height: parsed.values.height ? Number(parsed.values.height) : undefined,
      },
      input,
    );
    writeFileSync(output, svg);
    process.stdout.write(`wrote ${output}\n`);
    return 0;
  } catch (error) {
    process.stderr.write(`error: ${(error as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
