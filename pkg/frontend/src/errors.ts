/** Error taxonomy for the figure pipeline. */

/** The CSV parsed but nothing remains to plot after filtering. */
export class NoDataError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "NoDataError";
  }
}

/** The CSV does not conform to the sweep schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}
