import { SchemaError } from "../errors";
import { Table } from "../csv";
import { Panel, SvgCanvas } from "../svg";

export const WIDTH = 860;

export interface Frame {
    svg: SvgCanvas;
    panels: Panel[];
}

/** Canvas with 1..2 stacked plot panels, a title, and a caption line. */
export function makeFrame(title: string, caption: string, panelCount: 1 | 2): Frame {
    const panelH = 300;
    const top = 40;
    const gap = 70;
    const bottom = 60;
    const height = top + panelCount * panelH + (panelCount - 1) * gap + bottom;
    const svg = new SvgCanvas(WIDTH, height);
    svg.text(WIDTH / 2, 22, title, 14, "middle");
    svg.text(12, height - 12, caption, 9);
    const panels: Panel[] = [];
    for (let i = 0; i < panelCount; i++) {
        panels.push({ x0: 70, y0: top + i * (panelH + gap), w: WIDTH - 260, h: panelH });
    }
    return { svg, panels };
}

export function ensureRows(table: Table): void {
    if (table.rows.length === 0) {
        throw new SchemaError("no data rows");
    }
}

export function extent(values: number[]): [number, number] {
    return [Math.min(...values), Math.max(...values)];
}

/** Pad a [lo, hi] extent by 5% on each side (7% up for headroom). */
export function padded(lo: number, hi: number): [number, number] {
    const span = hi - lo || Math.abs(hi) || 1;
    return [lo - 0.05 * span, hi + 0.07 * span];
}
