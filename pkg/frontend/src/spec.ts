import * as fs from "fs";

import { SpecError } from "./errors";

export const FIGURE_KINDS = [
    "accuracy_vs_n", "contamination", "weights_boxplot", "influence_decay",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
    input_csv: string;
    figure_kind: FigureKind;
    output_path: string;
    format: "png" | "svg";
}

/** Load and validate a figure spec from a JSON file. */
export function loadSpec(path: string): FigureSpec {
    if (!fs.existsSync(path)) {
        throw new SpecError(`spec file not found: ${path}`);
    }
    let data: unknown;
    try {
        data = JSON.parse(fs.readFileSync(path, "utf-8"));
    } catch (err) {
        throw new SpecError(`spec file is not valid JSON: ${err}`);
    }
    return validateSpec(data);
}

export function validateSpec(data: unknown): FigureSpec {
    if (typeof data !== "object" || data === null) {
        throw new SpecError("spec must be a JSON object");
    }
    const spec = data as Record<string, unknown>;
    for (const field of ["input_csv", "figure_kind", "output_path", "format"]) {
        if (typeof spec[field] !== "string") {
            throw new SpecError(`spec field '${field}' must be a string`);
        }
    }
    const kind = spec.figure_kind as string;
    if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
        throw new SpecError(`unknown figure_kind '${kind}', expected one of ${FIGURE_KINDS.join(", ")}`);
    }
    const format = spec.format as string;
    if (format !== "png" && format !== "svg") {
        throw new SpecError(`format must be 'png' or 'svg', got '${format}'`);
    }
    if (!fs.existsSync(spec.input_csv as string)) {
        throw new SpecError(`input_csv not found: ${spec.input_csv}`);
    }
    return {
        input_csv: spec.input_csv as string,
        figure_kind: kind as FigureKind,
        output_path: spec.output_path as string,
        format,
    };
}
