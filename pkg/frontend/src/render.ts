import * as fs from "fs";
import * as path from "path";

import { parseCsv } from "./csv";
import { accuracyVsN, contamination } from "./figures/lines";
import { influenceDecay } from "./figures/influenceDecay";
import { weightsBoxplot } from "./figures/weightsBoxplot";
import { manifestHash } from "./manifest";
import { FigureKind, FigureSpec } from "./spec";

const RENDERERS: Record<FigureKind, (table: ReturnType<typeof parseCsv>, manifest: string) => string> = {
    accuracy_vs_n: accuracyVsN,
    contamination,
    weights_boxplot: weightsBoxplot,
    influence_decay: influenceDecay,
};

export interface RenderResult {
    outputPath: string;
    bytes: number;
    manifest: string;
}

/**
 * Render one figure per the spec. The input CSV is only read; all schema
 * checks run before anything is written, so failures leave no output file.
 */
export function renderFigure(spec: FigureSpec): RenderResult {
    const table = parseCsv(fs.readFileSync(spec.input_csv, "utf-8"));
    const manifest = manifestHash(spec.input_csv);
    const svg = RENDERERS[spec.figure_kind](table, manifest);

    let payload: Buffer;
    if (spec.format === "png") {
        // lazy import keeps the SVG path dependency-free
        const { Resvg } = require("@resvg/resvg-js");
        payload = Buffer.from(new Resvg(svg, { fitTo: { mode: "original" } }).render().asPng());
    } else {
        payload = Buffer.from(svg, "utf-8");
    }
    fs.mkdirSync(path.dirname(path.resolve(spec.output_path)), { recursive: true });
    fs.writeFileSync(spec.output_path, payload);
    return { outputPath: spec.output_path, bytes: payload.length, manifest };
}
