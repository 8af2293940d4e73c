/**
 * Survey state machine.
 *
 * Holds the current task and the in-progress form. The form never loses
 * state on a failed submit: a 400 from the service surfaces as an inline
 * field error, a network failure as a retry banner, and in both cases
 * the rater's selections stay put. Widgets reset only after an accepted
 * rating.
 */
import { ApiClient, ApiError, SurveyTask } from "./api.js";

export type SurveyPhase = "idle" | "rating" | "done" | "error";

export interface SurveyState {
  phase: SurveyPhase;
  task: SurveyTask | null;
  scores: Record<string, number>;
  tags: string[];
  comment: string;
  fieldError: string | null;
  networkError: boolean;
  completed: number;
}

export class SurveyController {
  private state: SurveyState = {
    phase: "idle",
    task: null,
    scores: {},
    tags: [],
    comment: "",
    fieldError: null,
    networkError: false,
    completed: 0,
  };

  constructor(
    private readonly api: ApiClient,
    private readonly rater: string,
    private readonly onChange: (state: SurveyState) => void = () => {},
  ) {}

  getState(): SurveyState {
    return { ...this.state, scores: { ...this.state.scores }, tags: [...this.state.tags] };
  }

  private emit(): void {
    this.onChange(this.getState());
  }

  /** Submit stays disabled until at least one dimension is rated. */
  get canSubmit(): boolean {
    return this.state.phase === "rating" && Object.keys(this.state.scores).length > 0;
  }

  async start(): Promise<void> {
    await this.loadNext();
  }

  private resetForm(): void {
    this.state.scores = {};
    this.state.tags = [];
    this.state.comment = "";
    this.state.fieldError = null;
  }

  private async loadNext(): Promise<void> {
    try {
      const task = await this.api.nextTask(this.rater);
      this.resetForm();
      if (task === null) {
        this.state.phase = "done";
        this.state.task = null;
      } else {
        this.state.phase = "rating";
        this.state.task = task;
      }
      this.state.networkError = false;
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.phase = "error";
        this.state.fieldError = err.reason;
      } else {
        this.state.networkError = true;
      }
    }
    this.emit();
  }

  setScore(dimension: string, value: number): void {
    const task = this.state.task;
    if (!task || !task.dimensions.includes(dimension)) return;
    if (!Number.isInteger(value) || value < 1 || value > 5) return;
    this.state.scores[dimension] = value;
    this.state.fieldError = null;
    this.emit();
  }

  toggleTag(tag: string): void {
    const task = this.state.task;
    if (!task || !task.tags.includes(tag)) return;
    const index = this.state.tags.indexOf(tag);
    if (index >= 0) {
      this.state.tags.splice(index, 1);
    } else {
      this.state.tags.push(tag);
    }
    this.emit();
  }

  setComment(text: string): void {
    this.state.comment = text;
    this.emit();
  }

  async submit(): Promise<void> {
    if (!this.canSubmit || !this.state.task) return;
    const payload = {
      item_id: this.state.task.item_id,
      rater_id: this.rater,
      scores: { ...this.state.scores },
      tags: [...this.state.tags],
      ...(this.state.comment ? { comment: this.state.comment } : {}),
    };
    try {
      await this.api.submitRating(payload);
    } catch (err) {
      if (err instanceof ApiError) {
        // invalid rating: show the service's reason, keep the form
        this.state.fieldError = err.reason;
      } else {
        // network failure: nothing was lost, offer retry
        this.state.networkError = true;
      }
      this.emit();
      return;
    }
    this.state.completed += 1;
    await this.loadNext();
  }

  /** Retry after a network failure without losing the form. */
  async retry(): Promise<void> {
    this.state.networkError = false;
    if (this.state.phase === "rating" && this.state.task) {
      await this.submit();
    } else {
      await this.loadNext();
    }
  }
}
