import * as crypto from "crypto";
import * as fs from "fs";
import * as path from "path";

/**
 * Provenance hash of the run manifest written by the harness next to its
 * results CSV (<stem>.manifest.json). Returns "none" when absent, so figures
 * built from hand-assembled CSVs still carry an explicit provenance note.
 */
export function manifestHash(inputCsv: string): string {
    const parsed = path.parse(inputCsv);
    const sibling = path.join(parsed.dir, `${parsed.name}.manifest.json`);
    if (!fs.existsSync(sibling)) {
        return "none";
    }
    const digest = crypto.createHash("sha256").update(fs.readFileSync(sibling)).digest("hex");
    return `sha256:${digest}`;
}
