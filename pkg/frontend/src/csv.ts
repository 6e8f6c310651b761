/** Sweep-CSV ingestion for the plot tool. */

export interface SweepRow {
    builder: string;
    values: Map<string, number>;
}

export class SchemaError extends Error {}

/** Columns every sweep file must provide for the y-axis it plots. */
export const KNOWN_X = ["N", "logN", "p", "ell"] as const;
export const KNOWN_Y = ["infidelity", "t_count", "depth", "gates"] as const;

export function parseCsv(text: string): { header: string[]; rows: SweepRow[] } {
    const lines = text
        .split(/\r?\n/)
        .map((l) => l.trim())
        .filter((l) => l.length > 0);
    if (lines.length === 0) {
        throw new SchemaError("empty CSV");
    }
    const header = lines[0].split(",").map((h) => h.trim());
    if (!header.includes("builder")) {
        throw new SchemaError("missing 'builder' column");
    }
    const rows: SweepRow[] = [];
    for (const line of lines.slice(1)) {
        const parts = line.split(",");
        if (parts.length !== header.length) {
            throw new SchemaError(`row has ${parts.length} fields, header has ${header.length}`);
        }
        const values = new Map<string, number>();
        let builder = "";
        header.forEach((name, i) => {
            if (name === "builder") {
                builder = parts[i];
                return;
            }
            const raw = parts[i].trim();
            if (raw === "") {
                return; // absent optional column for this row
            }
            const v = Number(raw);
            if (Number.isNaN(v)) {
                throw new SchemaError(`non-numeric value '${raw}' in column '${name}'`);
            }
            values.set(name, v);
        });
        rows.push({ builder, values });
    }
    return { header, rows };
}

/** Resolve the x column: 'logN' derives from the 'N' column. */
export function xValue(row: SweepRow, axis: string): number {
    if (axis === "logN") {
        const n = row.values.get("N");
        if (n === undefined) throw new SchemaError("x axis 'logN' needs an 'N' column");
        return Math.log2(n);
    }
    const v = row.values.get(axis);
    if (v === undefined) throw new SchemaError(`missing x column '${axis}'`);
    return v;
}

export function yValue(row: SweepRow, axis: string): number {
    const v = row.values.get(axis);
    if (v === undefined) throw new SchemaError(`missing y column '${axis}'`);
    return v;
}
