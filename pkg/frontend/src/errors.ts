/** Input CSV does not match the documented column contract. */
export class SchemaError extends Error {
    constructor(message: string) {
        super(message);
        this.name = "SchemaError";
    }
}

/** Figure spec file is missing, malformed, or inconsistent. */
export class SpecError extends Error {
    constructor(message: string) {
        super(message);
        this.name = "SpecError";
    }
}
