/** Comprehension-trial view: shows each trial's description and its
 * ten candidate tangrams, submits the click, and relays practice
 * feedback. Correctness is judged server-side; trial payloads carry
 * no target information. */

import { Api, ApiError, Feedback, Trial } from "./api.js";
import { el, messageOf } from "./dom.js";
import { applyColorMap, injectStimulus } from "./svgPieces.js";

export async function renderTrialView(
  root: HTMLElement,
  api: Api,
  participantId: string,
): Promise<void> {
  root.innerHTML = "";
  root.className = "trial-view";
  const status = el("p", "status");
  const phaseLabel = el("p", "phase-label");
  const description = el("p", "description");
  const items = el("div", "items");
  const feedbackLine = el("p", "feedback");
  feedbackLine.hidden = true;
  const nextBtn = el("button", "next-btn", "Next trial");
  nextBtn.hidden = true;
  const error = el("p", "error");
  root.append(status, phaseLabel, description, items, feedbackLine, nextBtn, error);

  const svgCache = new Map<string, string>();
  const stimulus = async (tangramId: string): Promise<string> => {
    const cached = svgCache.get(tangramId);
    if (cached !== undefined) return cached;
    const text = await api.stimulusSvg(tangramId);
    svgCache.set(tangramId, text);
    return text;
  };

  try {
    await api.startSession(participantId);
  } catch (err) {
    // An existing session is resumed, not an error: the server tracks
    // the next unanswered trial, so refreshes cannot duplicate responses.
    const resuming =
      err instanceof ApiError && err.status === 409 && err.message.includes("already exists");
    if (!resuming) {
      status.textContent = messageOf(err);
      return;
    }
  }

  let answered = false;

  const load = async (): Promise<void> => {
    error.textContent = "";
    feedbackLine.hidden = true;
    feedbackLine.textContent = "";
    nextBtn.hidden = true;
    const trial = await api.nextTrial(participantId);
    if (trial.done) {
      root.dataset.trialIndex = "done";
      delete root.dataset.phase;
      phaseLabel.textContent = "";
      description.innerHTML = "";
      items.innerHTML = "";
      status.textContent = "Session complete. Thank you!";
      return;
    }
    answered = false;
    root.dataset.trialIndex = String(trial.index);
    root.dataset.phase = trial.phase;
    status.textContent = `Trial ${trial.index + 1}`;
    phaseLabel.textContent = trial.phase === "practice" ? "Practice trial" : "Test trial";

    description.innerHTML = "";
    for (const [text, color] of trial.descriptionSpans) {
      const span = document.createElement("span");
      span.textContent = text;
      if (color !== null) {
        span.style.color = color;
        span.dataset.partColor = color;
      }
      description.appendChild(span);
    }

    items.innerHTML = "";
    const svgs = await Promise.all(trial.items.map((item) => stimulus(item.tangramId)));
    trial.items.forEach((item, index) => {
      const cell = el("div", "trial-item");
      cell.dataset.index = String(index);
      cell.dataset.tangramId = item.tangramId;
      const pieces = injectStimulus(cell, svgs[index] ?? "");
      applyColorMap(pieces, item.colorMap);
      cell.addEventListener("click", () => {
        void choose(trial, index);
      });
      items.appendChild(cell);
    });
  };

  const choose = async (trial: Trial, index: number): Promise<void> => {
    if (answered) return;
    answered = true;
    let feedback: Feedback;
    try {
      feedback = await api.submitResponse(participantId, trial.index, index);
    } catch (err) {
      answered = false;
      if (err instanceof ApiError && err.status === 409) {
        // Another tab (or a replayed click) got there first; resync.
        await load();
        return;
      }
      error.textContent = messageOf(err);
      return;
    }
    items.querySelector(`[data-index="${index}"]`)?.classList.add("chosen");
    if (feedback.correctIndex !== undefined) {
      // Practice: report correctness and highlight the described tangram.
      items
        .querySelector(`[data-index="${feedback.correctIndex}"]`)
        ?.classList.add("correct-choice");
      feedbackLine.textContent = feedback.correct
        ? "Correct!"
        : "Not quite. The described tangram is outlined.";
      feedbackLine.hidden = false;
      nextBtn.hidden = false;
    } else {
      // Test trials advance silently.
      await load();
    }
  };

  nextBtn.addEventListener("click", () => {
    void load();
  });

  await load();
}
