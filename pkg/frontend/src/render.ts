/**
 * Plain-DOM rendering. All widgets are native buttons and inputs, so
 * everything is keyboard operable out of the box. Prompts render as
 * text.
 */
import { DashboardData } from "./dashboard.js";
import { SurveyController, SurveyState } from "./survey.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderSurvey(
  container: HTMLElement,
  controller: SurveyController,
  state: SurveyState,
): void {
  container.replaceChildren();

  if (state.networkError) {
    const banner = el("div", "banner banner-retry", "Connection lost. Your answers are kept.");
    const retry = el("button", "retry", "Retry");
    retry.addEventListener("click", () => void controller.retry());
    banner.append(retry);
    container.append(banner);
  }

  if (state.phase === "done") {
    container.append(el("p", "all-done", "All done. Thank you for rating!"));
    container.append(el("p", "progress", `${state.completed} sentence(s) rated.`));
    return;
  }
  if (state.phase !== "rating" || !state.task) {
    container.append(el("p", "loading", "Loading the next sentence..."));
    return;
  }

  const task = state.task;
  container.append(el("p", "progress", `Rated so far: ${state.completed}`));
  container.append(el("blockquote", "sentence", task.text));

  for (const dimension of task.dimensions) {
    const row = el("fieldset", "likert-row");
    const prompt = task.prompts[dimension] ?? dimension;
    row.append(el("legend", "prompt", prompt));
    for (let value = 1; value <= 5; value++) {
      const button = el("button", "likert-step", String(value));
      button.type = "button";
      button.setAttribute("aria-label", `${dimension} ${value} of 5`);
      if (state.scores[dimension] === value) button.classList.add("selected");
      button.addEventListener("click", () => controller.setScore(dimension, value));
      row.append(button);
    }
    container.append(row);
  }

  const tagRow = el("div", "tags");
  for (const tag of task.tags) {
    const toggle = el("button", "tag-toggle", tag.replace(/_/g, " "));
    toggle.type = "button";
    toggle.setAttribute("aria-pressed", String(state.tags.includes(tag)));
    if (state.tags.includes(tag)) toggle.classList.add("selected");
    toggle.addEventListener("click", () => controller.toggleTag(tag));
    tagRow.append(toggle);
  }
  container.append(tagRow);

  const comment = el("textarea", "comment");
  comment.placeholder = "Optional comment";
  comment.value = state.comment;
  comment.addEventListener("input", () => controller.setComment(comment.value));
  container.append(comment);

  if (state.fieldError) {
    container.append(el("p", "field-error", `Not accepted: ${state.fieldError}`));
  }

  const submit = el("button", "submit", "Submit rating");
  submit.type = "button";
  submit.disabled = !controller.canSubmit;
  submit.addEventListener("click", () => void controller.submit());
  container.append(submit);
}

export function renderDashboard(container: HTMLElement, data: DashboardData): void {
  container.replaceChildren();
  container.append(el("p", "weightset", `Active weightset: ${data.weightsetId}`));

  for (const row of data.rows) {
    const card = el("section", "item-card");
    card.append(el("h3", "item-id", row.itemId));
    card.append(el("p", "composite", `composite ${row.composite.toFixed(3)}`));
    for (const [dim, value] of Object.entries(row.dimensionScores)) {
      const bar = el("div", "bar-row");
      bar.append(el("span", "bar-label", dim));
      const bar_fill = el("div", "bar");
      bar_fill.style.width = `${Math.round(value * 100)}%`;
      bar_fill.title = value.toFixed(3);
      bar.append(bar_fill);
      const human = row.humanMean?.[dim];
      bar.append(
        el("span", "bar-value", human === undefined ? value.toFixed(3) : `${value.toFixed(3)} / human ${human.toFixed(3)}`),
      );
      card.append(bar);
    }
    const tags = Object.entries(row.tagHistogram)
      .map(([tag, count]) => `${tag.replace(/_/g, " ")}: ${count}`)
      .join(", ");
    if (tags) card.append(el("p", "tag-histogram", tags));
    container.append(card);
  }

  const agreement = el("section", "agreement");
  agreement.append(el("h3", undefined, "Inter-rater agreement"));
  for (const [dim, report] of Object.entries(data.agreement)) {
    agreement.append(
      el(
        "p",
        "alpha",
        report ? `${dim}: alpha ${report.alpha.toFixed(3)} (${report.raters} raters)` : `${dim}: not enough overlap yet`,
      ),
    );
  }
  container.append(agreement);
}
