/** Entry point: a minimal chooser between the annotation task and the
 * comprehension trials, both driven purely through the service API. */

import { Api } from "./api.js";
import { renderAnnotationView } from "./annotation.js";
import { el } from "./dom.js";
import { renderTrialView } from "./trials.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery !== null) return fromQuery;
  const injected = (window as { __API_BASE__?: string }).__API_BASE__;
  return injected ?? "";
}

export function initApp(root: HTMLElement): void {
  const api = new Api(apiBase());
  root.innerHTML = "";

  const menu = el("div", "menu");
  const view = el("div", "view");

  const annotateForm = el("div", "menu-row");
  annotateForm.appendChild(el("span", "menu-label", "Worker id "));
  const workerInput = el("input", "worker-id-input");
  const annotateBtn = el("button", "start-annotating", "Annotate shapes");
  annotateBtn.addEventListener("click", () => {
    if (workerInput.value.trim().length === 0) return;
    void renderAnnotationView(view, api, workerInput.value.trim());
  });
  annotateForm.append(workerInput, annotateBtn);

  const trialForm = el("div", "menu-row");
  trialForm.appendChild(el("span", "menu-label", "Participant id "));
  const participantInput = el("input", "participant-id-input");
  const trialBtn = el("button", "start-trials", "Start trials");
  trialBtn.addEventListener("click", () => {
    if (participantInput.value.trim().length === 0) return;
    void renderTrialView(view, api, participantInput.value.trim());
  });
  trialForm.append(participantInput, trialBtn);

  menu.append(annotateForm, trialForm);
  root.append(menu, view);
}

const appRoot = document.getElementById("app");
if (appRoot !== null) {
  initApp(appRoot);
}
