// Chart options for the four figure kinds, all driven by the solver's CSVs.

import type { EChartsOption } from "echarts";
import { CsvTable, requireColumn } from "./csv";

export type FigureKind = "node_types" | "field_scatter" | "error_pair" | "line_plot";

export const FIGURE_KINDS: FigureKind[] = [
  "node_types",
  "field_scatter",
  "error_pair",
  "line_plot",
];

// viridis stops; perceptually uniform and safe on white
const GRADIENT = ["#440154", "#414487", "#2a788e", "#22a884", "#7ad151", "#fde725"];

const KIND_LABELS: Record<number, string> = {
  0: "interior",
  1: "neumann",
  2: "dirichlet",
};
const KIND_COLORS: Record<number, string> = {
  0: "#bbbbbb",
  1: "#d62728",
  2: "#1f77b4",
};

function squareAxes(xs: number[], ys: number[]) {
  const pad = 0.05;
  const lo = Math.min(Math.min(...xs), Math.min(...ys));
  const hi = Math.max(Math.max(...xs), Math.max(...ys));
  const span = hi - lo || 1.0;
  return {
    min: lo - pad * span,
    max: hi + pad * span,
  };
}

function valueRange(values: number[]): { min: number; max: number } {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!Number.isFinite(lo)) return { min: 0, max: 1 };
  if (lo === hi) return { min: lo, max: lo + 1 }; // degenerate constant field
  return { min: lo, max: hi };
}

export function nodeTypesOption(table: CsvTable): EChartsOption {
  const xs = requireColumn(table, "x");
  const ys = requireColumn(table, "y");
  const kinds = requireColumn(table, "kind");
  const range = squareAxes(xs, ys);

  const byKind = new Map<number, [number, number][]>();
  for (let i = 0; i < table.rowCount; i++) {
    const kind = kinds[i];
    if (!byKind.has(kind)) byKind.set(kind, []);
    byKind.get(kind)!.push([xs[i], ys[i]]);
  }
  const series = [...byKind.keys()].sort().map((kind) => ({
    type: "scatter" as const,
    name: KIND_LABELS[kind] ?? `kind ${kind}`,
    data: byKind.get(kind)!,
    symbolSize: kind === 0 ? 2 : 4,
    itemStyle: { color: KIND_COLORS[kind] ?? "#000000" },
  }));

  return {
    animation: false,
    legend: { top: 4 },
    xAxis: { ...range, name: "x" },
    yAxis: { ...range, name: "y" },
    series,
  };
}

export function fieldScatterOption(table: CsvTable, field: string): EChartsOption {
  const xs = requireColumn(table, "x");
  const ys = requireColumn(table, "y");
  const values = requireColumn(table, field);
  const range = squareAxes(xs, ys);
  const span = valueRange(values);

  const data: [number, number, number][] = [];
  for (let i = 0; i < table.rowCount; i++) data.push([xs[i], ys[i], values[i]]);

  return {
    animation: false,
    title: { text: field, left: "center" },
    xAxis: { ...range, name: "x" },
    yAxis: { ...range, name: "y" },
    visualMap: {
      type: "continuous",
      min: span.min,
      max: span.max,
      dimension: 2,
      inRange: { color: GRADIENT },
      right: 8,
      top: "middle",
      calculable: false,
    },
    series: [{ type: "scatter", data, symbolSize: 3 }],
  };
}

export function errorPairOption(table: CsvTable): EChartsOption {
  const xs = requireColumn(table, "x");
  const ys = requireColumn(table, "y");
  const topField = "eps_an";
  const bottomField = "eps_imex";
  const top = requireColumn(table, topField);
  const bottom = requireColumn(table, bottomField);
  const range = squareAxes(xs, ys);

  const makeData = (values: number[]) => {
    const data: [number, number, number][] = [];
    for (let i = 0; i < table.rowCount; i++) data.push([xs[i], ys[i], values[i]]);
    return data;
  };
  const spanTop = valueRange(top);
  const spanBottom = valueRange(bottom);

  // stacked panels with independent color scales: the two fields differ by
  // orders of magnitude
  return {
    animation: false,
    title: [
      { text: topField, left: "center", top: 2 },
      { text: bottomField, left: "center", top: "50%" },
    ],
    grid: [
      { top: 30, bottom: "55%", left: 60, right: 110 },
      { top: "55%", bottom: 30, left: 60, right: 110 },
    ],
    xAxis: [
      { ...range, gridIndex: 0 },
      { ...range, gridIndex: 1 },
    ],
    yAxis: [
      { ...range, gridIndex: 0 },
      { ...range, gridIndex: 1 },
    ],
    visualMap: [
      {
        type: "continuous",
        min: spanTop.min,
        max: spanTop.max,
        seriesIndex: 0,
        dimension: 2,
        inRange: { color: GRADIENT },
        right: 8,
        top: "10%",
      },
      {
        type: "continuous",
        min: spanBottom.min,
        max: spanBottom.max,
        seriesIndex: 1,
        dimension: 2,
        inRange: { color: GRADIENT },
        right: 8,
        top: "60%",
      },
    ],
    series: [
      { type: "scatter", data: makeData(top), symbolSize: 3, xAxisIndex: 0, yAxisIndex: 0 },
      { type: "scatter", data: makeData(bottom), symbolSize: 3, xAxisIndex: 1, yAxisIndex: 1 },
    ],
  };
}

export function linePlotOption(table: CsvTable): EChartsOption {
  const t = requireColumn(table, "t");
  const curves: [string, string][] = [
    ["u_im_norm", "solution"],
    ["eps_an_norm", "error"],
    ["eps_imex_norm", "IMEX"],
  ];
  const series = curves.map(([column, label]) => ({
    type: "line" as const,
    name: label,
    showSymbol: false,
    data: requireColumn(table, column).map((v, i) => [t[i], v] as [number, number]),
  }));
  return {
    animation: false,
    legend: { top: 4 },
    xAxis: { type: "value", name: "t" },
    yAxis: { type: "value", min: 0, max: 1.05 },
    series,
  };
}

export function buildOption(kind: FigureKind, table: CsvTable, field?: string): EChartsOption {
  switch (kind) {
    case "node_types":
      return nodeTypesOption(table);
    case "field_scatter":
      if (!field) throw new Error("field_scatter requires --field");
      return fieldScatterOption(table, field);
    case "error_pair":
      return errorPairOption(table);
    case "line_plot":
      return linePlotOption(table);
    default:
      throw new Error(`unknown figure kind '${kind}'`);
  }
}
