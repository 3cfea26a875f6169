import { Table, numeric, requireColumns } from "../csv";
import { groupBy } from "../stats";
import { PALETTE, drawAxes, drawLegend, logScale } from "../svg";
import { ensureRows, extent, makeFrame } from "./common";

const SERIES: Array<{ column: string; label: string; color: string; dash: string }> = [
    { column: "max_infl_gp", label: "exact GP peak influence", color: PALETTE[0], dash: "" },
    { column: "bound_gp", label: "exact GP bound", color: PALETTE[0], dash: "5,3" },
    { column: "max_infl_pp", label: "low-rank peak influence", color: PALETTE[1], dash: "" },
    { column: "bound_pp", label: "low-rank bound", color: PALETTE[1], dash: "5,3" },
];

/** Peak influences and their analytic bounds against n, log-log. */
export function influenceDecay(table: Table, manifest: string): string {
    requireColumns(table, ["n", "m", ...SERIES.map((s) => s.column)]);
    ensureRows(table);
    const ns = numeric(table, "n");
    const ms = numeric(table, "m");
    const values = new Map(SERIES.map((s) => [s.column, numeric(table, s.column)]));

    const frame = makeFrame("Influence decay with training size", `manifest: ${manifest}`, 1);
    const panel = frame.panels[0];
    const all = SERIES.flatMap((s) => values.get(s.column)!).filter((v) => Number.isFinite(v) && v > 0);
    const [lo, hi] = extent(all);
    const [n0, n1] = extent(ns);
    const xScale = logScale(n0, n1, panel.x0, panel.x0 + panel.w);
    const yScale = logScale(hi * 1.5, lo / 1.5, panel.y0, panel.y0 + panel.h);
    const yTicks = decades(lo, hi);
    drawAxes(frame.svg, panel, [...new Set(ns)].sort((a, b) => a - b), xScale,
             "n (log scale)", yTicks, yScale, "peak influence (log scale)");

    const rowIds = table.rows.map((_, i) => i);
    const byM = groupBy(rowIds, (i) => String(ms[i]));
    const multiM = byM.size > 1;
    const legend: Array<[string, string]> = [];
    for (const [mValue, rows] of byM) {
        const sorted = [...rows].sort((a, b) => ns[a] - ns[b]);
        for (const s of SERIES) {
            const pts = sorted
                .filter((i) => Number.isFinite(values.get(s.column)![i]) && values.get(s.column)![i] > 0)
                .map((i): [number, number] => [xScale(ns[i]), yScale(values.get(s.column)![i])]);
            if (pts.length > 0) {
                frame.svg.polyline(pts, s.color, 1.5, s.dash);
                for (const [x, y] of pts) {
                    frame.svg.circle(x, y, 2, s.color);
                }
            }
            legend.push([multiM ? `${s.label} (m=${mValue})` : s.label, s.color]);
        }
    }
    drawLegend(frame.svg, 650, panel.y0 + 10,
               legend.slice(0, multiM ? legend.length : SERIES.length));
    return frame.svg.toString(`report-plots manifest:${manifest}`);
}

function decades(lo: number, hi: number): number[] {
    const out: number[] = [];
    for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
        out.push(10 ** e);
    }
    return out;
}
