/**
 * Entry point. Mounts the survey into #survey and, when a #dashboard
 * element exists, the reviewer dashboard next to it. The service URL
 * comes from one setting: a data-service-url attribute on the body,
 * defaulting to same-origin.
 */
import { ApiClient } from "./api.js";
import { loadDashboard } from "./dashboard.js";
import { renderDashboard, renderSurvey } from "./render.js";
import { SurveyController } from "./survey.js";
import { getRaterToken } from "./token.js";

export * from "./api.js";
export * from "./dashboard.js";
export * from "./survey.js";
export * from "./token.js";
export { renderDashboard, renderSurvey };

export async function main(): Promise<void> {
  const serviceUrl = document.body.dataset.serviceUrl || window.location.origin;
  const api = new ApiClient(serviceUrl);

  const surveyRoot = document.getElementById("survey");
  if (surveyRoot) {
    const controller: SurveyController = new SurveyController(
      api,
      getRaterToken(),
      (state) => renderSurvey(surveyRoot, controller, state),
    );
    await controller.start();
  }

  const dashboardRoot = document.getElementById("dashboard");
  if (dashboardRoot) {
    renderDashboard(dashboardRoot, await loadDashboard(api));
  }
}

if (typeof document !== "undefined" && document.getElementById("survey")) {
  void main();
}
