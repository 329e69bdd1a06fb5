// Server-side SVG rendering of the figure options (no DOM, no canvas).

import * as echarts from "echarts";
import { parseCsv } from "./csv";
import { buildOption, FigureKind } from "./figures";

export interface RenderSettings {
  width?: number;
  height?: number;
}

export function renderSvg(
  kind: FigureKind,
  csvText: string,
  field?: string,
  settings: RenderSettings = {},
  path = "<memory>",
): string {
  const table = parseCsv(csvText, path);
  const option = buildOption(kind, table, field);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: settings.width ?? 720,
    height: settings.height ?? (kind === "error_pair" ? 960 : 560),
  });
  try {
    chart.setOption(option);
    return normalizeCounters(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}

// The zr<N> namespace and the cls-<M> class registry embed process-global
// counters; renumbering by first appearance makes identical inputs give
// byte-identical SVG regardless of how many charts rendered before.
function normalizeCounters(svg: string): string {
  const flattened = svg.replace(/zr\d+-/g, "zr-");
  const seen = new Map<string, string>();
  return flattened.replace(/zr-cls-\d+/g, (token) => {
    let renamed = seen.get(token);
    if (!renamed) {
      renamed = `zr-cls-${seen.size}`;
      seen.set(token, renamed);
    }
    return renamed;
  });
}
