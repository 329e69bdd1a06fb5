// Minimal reader for the solver's machine-generated CSV artifacts.
// No quoting or escaping: the files are plain comma-separated numerics.

export interface CsvTable {
  header: string[];
  /** Column-major numeric data; empty fields parse as NaN. */
  columns: Map<string, number[]>;
  rowCount: number;
}

export class CsvError extends Error {
  constructor(
    public readonly path: string,
    public readonly line: number,
    detail: string,
  ) {
    super(`${path}:${line}: ${detail}`);
  }
}

export function parseCsv(text: string, path = "<memory>"): CsvTable {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new CsvError(path, 1, "file is empty");

  const header = lines[0].split(",");
  const data: number[][] = header.map(() => []);
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new CsvError(path, i + 1, `expected ${header.length} fields, got ${fields.length}`);
    }
    for (let j = 0; j < fields.length; j++) {
      if (fields[j] === "") {
        data[j].push(NaN);
        continue;
      }
      const value = Number(fields[j]);
      if (Number.isNaN(value)) {
        throw new CsvError(path, i + 1, `column '${header[j]}': not a number: '${fields[j]}'`);
      }
      data[j].push(value);
    }
  }

  const columns = new Map<string, number[]>();
  header.forEach((name, j) => columns.set(name, data[j]));
  return { header, columns, rowCount: lines.length - 1 };
}

export function requireColumn(table: CsvTable, name: string): number[] {
  const column = table.columns.get(name);
  if (!column) {
    throw new Error(`column '${name}' not found; header has: ${table.header.join(", ")}`);
  }
  return column;
}
