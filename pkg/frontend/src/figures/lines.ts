import { Table, numeric, okRows, requireColumns, strings } from "../csv";
import { groupBy, mean } from "../stats";
import { PALETTE, Scale, drawAxes, drawLegend, linScale, logScale, ticks } from "../svg";
import { Frame, ensureRows, extent, makeFrame, padded } from "./common";

interface SeriesPoint {
    x: number;
    rmse: number;
    lps: number;
}

const LEGEND_X = 690;

/**
 * Shared two-panel (RMSE, LPS) line chart over a numeric x column, one line
 * per method, averaging replicates at each x.
 */
function methodLines(table: Table, xColumn: string, xLog: boolean,
                     title: string, xLabel: string, manifest: string): string {
    const data = okRows(table);
    requireColumns(data, ["method", xColumn, "rmse", "lps"]);
    ensureRows(data);
    const methods = strings(data, "method");
    const xs = numeric(data, xColumn);
    const rmse = numeric(data, "rmse");
    const lps = numeric(data, "lps");

    const rows = methods.map((method, i) => ({ method, x: xs[i], rmse: rmse[i], lps: lps[i] }));
    const byMethod = groupBy(rows, (r) => r.method);
    const series = new Map<string, SeriesPoint[]>();
    for (const [method, items] of byMethod) {
        const byX = groupBy(items, (r) => String(r.x));
        const points: SeriesPoint[] = [...byX.values()].map((group) => ({
            x: group[0].x,
            rmse: mean(group.map((g) => g.rmse)),
            lps: mean(group.map((g) => g.lps)),
        }));
        points.sort((a, b) => a.x - b.x);
        series.set(method, points);
    }

    const frame: Frame = makeFrame(title, `manifest: ${manifest}`, 2);
    const allX = xs;
    const [x0, x1] = extent(allX);
    const panelsMeta: Array<{ field: "rmse" | "lps"; label: string }> = [
        { field: "rmse", label: "RMSE" },
        { field: "lps", label: "LPS" },
    ];
    panelsMeta.forEach(({ field, label }, p) => {
        const panel = frame.panels[p];
        const values = field === "rmse" ? rmse : lps;
        const [lo, hi] = padded(...extent(values));
        const xScale: Scale = xLog
            ? logScale(x0, x1, panel.x0, panel.x0 + panel.w)
            : linScale(Math.min(x0, 0), x1, panel.x0, panel.x0 + panel.w);
        const yScale = linScale(hi, lo, panel.y0, panel.y0 + panel.h);
        const xTicks = xLog ? [...new Set(allX)].sort((a, b) => a - b)
            : ticks(Math.min(x0, 0), x1, 6);
        drawAxes(frame.svg, panel, xTicks, xScale, xLabel, ticks(lo, hi, 5), yScale, label);
        let c = 0;
        for (const [, points] of series) {
            const color = PALETTE[c % PALETTE.length];
            frame.svg.polyline(points.map((pt) => [xScale(pt.x), yScale(pt[field])]), color);
            for (const pt of points) {
                frame.svg.circle(xScale(pt.x), yScale(pt[field]), 2.5, color);
            }
            c += 1;
        }
    });
    drawLegend(frame.svg, LEGEND_X, frame.panels[0].y0 + 10,
               [...series.keys()].map((method, i) => [method, PALETTE[i % PALETTE.length]]));
    return frame.svg.toString(`report-plots manifest:${manifest}`);
}

export function accuracyVsN(table: Table, manifest: string): string {
    return methodLines(table, "n", true, "Prediction accuracy vs training size",
                       "n (log scale)", manifest);
}

export function contamination(table: Table, manifest: string): string {
    return methodLines(table, "contamination", false,
                       "Prediction accuracy under training-set contamination",
                       "contamination value", manifest);
}
