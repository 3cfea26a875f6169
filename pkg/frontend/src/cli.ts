#!/usr/bin/env node
/**
 * report-plots render --spec <path>
 *
 * Reads a JSON figure spec, renders the figure from the referenced harness
 * CSV, and writes the SVG/PNG. Exit codes: 0 success, 2 spec/schema error,
 * 3 unexpected failure.
 */

import { parseArgs } from "util";

import { SchemaError, SpecError } from "./errors";
import { renderFigure } from "./render";
import { loadSpec } from "./spec";

export function main(argv: string[]): number {
    let parsed;
    try {
        parsed = parseArgs({
            args: argv,
            allowPositionals: true,
            options: { spec: { type: "string" } },
        });
    } catch (err) {
        console.error(`argument error: ${(err as Error).message}`);
        return 2;
    }
    const [command] = parsed.positionals;
    if (command !== "render" || !parsed.values.spec) {
        console.error("usage: report-plots render --spec <figure-spec.json>");
        return 2;
    }
    try {
        const result = renderFigure(loadSpec(parsed.values.spec));
        console.log(`wrote ${result.outputPath} (${result.bytes} bytes, manifest ${result.manifest})`);
        return 0;
    } catch (err) {
        if (err instanceof SpecError || err instanceof SchemaError) {
            console.error(`${err.name}: ${err.message}`);
            return 2;
        }
        console.error(`failure: ${err}`);
        return 3;
    }
}

if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
