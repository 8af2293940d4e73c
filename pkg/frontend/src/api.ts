/**
 * Typed client for the evaluation service JSON API.
 *
 * Every response is validated with zod before it reaches the UI, so the
 * UI never renders a number the service did not send.
 */
import { z } from "zod";

const surveyTaskSchema = z.object({
  v: z.number(),
  task_id: z.string(),
  item_id: z.string(),
  text: z.string(),
  source: z.string(),
  dimensions: z.array(z.string()),
  tags: z.array(z.string()),
  prompts: z.record(z.string()),
});

const ratingAckSchema = z.object({
  v: z.number(),
  accepted: z.number(),
  superseded: z.boolean(),
});

const healthSchema = z.object({
  v: z.number(),
  status: z.string(),
  items: z.number(),
  weightset_id: z.string(),
});

const dimensionScoreSchema = z.object({
  value: z.number(),
  components: z.record(z.unknown()).optional(),
  flags: z.array(z.string()).optional(),
});

const scoreReportSchema = z
  .object({
    item_id: z.string(),
    composite: z.number(),
    weightset_id: z.string(),
    dimensions: z.record(dimensionScoreSchema),
  })
  .passthrough();

const aggregateSchema = z
  .object({
    item_id: z.string(),
    mean: z.record(z.number()),
    median: z.record(z.number()),
    count: z.record(z.number()),
    normalized_mean: z.record(z.number()),
    tag_histogram: z.record(z.number()),
  })
  .passthrough();

const agreementSchema = z.object({
  v: z.number(),
  dimension: z.string(),
  alpha: z.number(),
  raters: z.number(),
  items: z.number(),
});

const exportRowSchema = z
  .object({
    item_id: z.string(),
    human: z.record(z.number()),
    count: z.record(z.number()),
    tag_histogram: z.record(z.number()),
  })
  .passthrough();

export type SurveyTask = z.infer<typeof surveyTaskSchema>;
export type RatingAck = z.infer<typeof ratingAckSchema>;
export type ScoreReport = z.infer<typeof scoreReportSchema>;
export type Aggregate = z.infer<typeof aggregateSchema>;
export type AgreementReport = z.infer<typeof agreementSchema>;
export type ExportRow = z.infer<typeof exportRowSchema>;

export interface RatingPayload {
  item_id: string;
  rater_id: string;
  scores: Record<string, number>;
  tags: string[];
  comment?: string;
}

/** Service-reported failure (4xx/5xx with a JSON error body). */
export class ApiError extends Error {
  readonly status: number;
  readonly reason: string;

  constructor(status: number, reason: string) {
    super(`service error ${status}: ${reason}`);
    this.status = status;
    this.reason = reason;
  }
}

async function errorReason(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through
  }
  return response.statusText || `http_${response.status}`;
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async getJson(path: string): Promise<unknown> {
    const response = await fetch(this.url(path));
    if (!response.ok) {
      throw new ApiError(response.status, await errorReason(response));
    }
    return response.json();
  }

  async health() {
    return healthSchema.parse(await this.getJson("/health"));
  }

  async itemIds(): Promise<string[]> {
    const body = (await this.getJson("/items")) as { ids: string[] };
    return body.ids;
  }

  /** Next task for this rater, or null when the queue is exhausted (204). */
  async nextTask(rater: string): Promise<SurveyTask | null> {
    const response = await fetch(
      this.url(`/survey/next?rater=${encodeURIComponent(rater)}`),
    );
    if (response.status === 204) return null;
    if (!response.ok) {
      throw new ApiError(response.status, await errorReason(response));
    }
    return surveyTaskSchema.parse(await response.json());
  }

  async submitRating(payload: RatingPayload): Promise<RatingAck> {
    const response = await fetch(this.url("/ratings"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await errorReason(response));
    }
    return ratingAckSchema.parse(await response.json());
  }

  async score(itemId: string): Promise<ScoreReport> {
    return scoreReportSchema.parse(
      await this.getJson(`/items/${encodeURIComponent(itemId)}/score`),
    );
  }

  /** Aggregate ratings for one item; null when nothing is rated yet. */
  async aggregate(itemId: string): Promise<Aggregate | null> {
    try {
      return aggregateSchema.parse(
        await this.getJson(`/items/${encodeURIComponent(itemId)}/aggregate`),
      );
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  }

  /** Agreement for one dimension; null when overlap is insufficient. */
  async agreement(dimension: string): Promise<AgreementReport | null> {
    try {
      return agreementSchema.parse(
        await this.getJson(`/agreement/${encodeURIComponent(dimension)}`),
      );
    } catch (err) {
      if (err instanceof ApiError && err.status === 400) return null;
      throw err;
    }
  }

  async exportRows(): Promise<ExportRow[]> {
    const body = (await this.getJson("/export")) as { rows: unknown[] };
    return body.rows.map((row) => exportRowSchema.parse(row));
  }
}
