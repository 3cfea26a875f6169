import { SchemaError } from "./errors";

export interface Table {
    columns: string[];
    rows: string[][];
}

/**
 * Parse a harness CSV: one header line, comma-separated, no quoting.
 * Rejects ragged rows; keeps every value as a string.
 */
export function parseCsv(text: string): Table {
    const lines = text.split("\n").filter((line) => line.length > 0);
    if (lines.length === 0) {
        throw new SchemaError("empty file: no header line");
    }
    const columns = lines[0].split(",");
    const rows = lines.slice(1).map((line, i) => {
        const cells = line.split(",");
        if (cells.length !== columns.length) {
            throw new SchemaError(`row ${i + 1} has ${cells.length} cells, expected ${columns.length}`);
        }
        return cells;
    });
    return { columns, rows };
}

/** Indices of the named columns; names the first missing column. */
export function requireColumns(table: Table, names: string[]): number[] {
    return names.map((name) => {
        const idx = table.columns.indexOf(name);
        if (idx < 0) {
            throw new SchemaError(`missing column: ${name}`);
        }
        return idx;
    });
}

export function numeric(table: Table, name: string): number[] {
    const [idx] = requireColumns(table, [name]);
    return table.rows.map((row, i) => {
        const value = Number(row[idx]);
        if (Number.isNaN(value) && row[idx] !== "nan") {
            throw new SchemaError(`column ${name}, row ${i + 1}: not a number (${row[idx]})`);
        }
        return value;
    });
}

export function strings(table: Table, name: string): string[] {
    const [idx] = requireColumns(table, [name]);
    return table.rows.map((row) => row[idx]);
}

/** Drop rows whose status column (when present) is not "ok". */
export function okRows(table: Table): Table {
    const idx = table.columns.indexOf("status");
    if (idx < 0) {
        return table;
    }
    return { columns: table.columns, rows: table.rows.filter((row) => row[idx] === "ok") };
}

/** Weight columns p1..pL in level order; empty when none exist. */
export function weightColumns(table: Table): string[] {
    return table.columns
        .filter((name) => /^p\d+$/.test(name))
        .sort((a, b) => Number(a.slice(1)) - Number(b.slice(1)));
}
