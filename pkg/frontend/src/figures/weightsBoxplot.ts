import { SchemaError } from "../errors";
import { Table, numeric, requireColumns, strings, weightColumns } from "../csv";
import { boxStats, groupBy } from "../stats";
import { PALETTE, drawAxes, linScale, ticks } from "../svg";
import { ensureRows, makeFrame } from "./common";

/**
 * Distribution of the learned resolution weights: one box per level,
 * grouped by contamination value, over the replicate rows.
 */
export function weightsBoxplot(table: Table, manifest: string): string {
    requireColumns(table, ["contamination"]);
    ensureRows(table);
    const levels = weightColumns(table);
    if (levels.length === 0) {
        throw new SchemaError("missing column: p1 (no weight columns found)");
    }
    const contamination = strings(table, "contamination");
    const weightValues = levels.map((name) => numeric(table, name));

    const rowIds = table.rows.map((_, i) => i);
    const byLevelValue = groupBy(rowIds, (i) => contamination[i]);
    const groups = [...byLevelValue.keys()].sort((a, b) => Number(a) - Number(b));

    const frame = makeFrame(
        `Resolution weights by contamination level (L=${levels.length})`,
        `manifest: ${manifest}`, 1);
    const panel = frame.panels[0];
    const yScale = linScale(1.05, -0.02, panel.y0, panel.y0 + panel.h);
    const slot = panel.w / groups.length;
    const boxW = Math.min(28, (slot * 0.8) / levels.length);

    drawAxes(frame.svg, panel, [], (x) => x, "contamination value",
             ticks(0, 1, 5), yScale, "weight");
    groups.forEach((group, g) => {
        const center = panel.x0 + slot * (g + 0.5);
        frame.svg.text(center, panel.y0 + panel.h + 16, group, 10, "middle");
        const rows = byLevelValue.get(group)!;
        levels.forEach((_, level) => {
            const values = rows.map((i) => weightValues[level][i]);
            const s = boxStats(values);
            const x = center + (level - (levels.length - 1) / 2) * boxW - boxW * 0.4;
            const color = PALETTE[level % PALETTE.length];
            const cx = x + boxW * 0.4;
            frame.svg.line(cx, yScale(s.lo), cx, yScale(s.q1), color);
            frame.svg.line(cx, yScale(s.q3), cx, yScale(s.hi), color);
            frame.svg.rect(x, yScale(s.q3), boxW * 0.8,
                           Math.max(yScale(s.q1) - yScale(s.q3), 0.5),
                           "none", color, "box");
            frame.svg.line(x, yScale(s.median), x + boxW * 0.8, yScale(s.median), color, 2);
        });
    });
    levels.forEach((name, level) => {
        const y = panel.y0 + 10 + level * 16;
        frame.svg.line(700, y - 4, 718, y - 4, PALETTE[level % PALETTE.length], 2);
        frame.svg.text(724, y, `level ${level + 1} (${name})`, 11);
    });
    return frame.svg.toString(`report-plots manifest:${manifest}`);
}
