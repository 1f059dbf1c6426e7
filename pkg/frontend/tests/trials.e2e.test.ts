/** End-to-end trial-flow tests against a live service instance. The
 * client never sees target indexes, so sessions are driven blind: the
 * catch trial is recognized by its unmistakable description. */

import { describe, expect, it } from "vitest";

import { PART_COLOR_ORDER } from "../src/colors.js";
import { renderTrialView } from "../src/trials.js";
import { click, liveApi, query, until } from "./helpers.js";

const CATCH_DESCRIPTION = "square";

function freshRoot(): HTMLElement {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}

function trialItems(root: HTMLElement): HTMLElement[] {
  return [...root.querySelectorAll<HTMLElement>(".trial-item")];
}

function trialReady(root: HTMLElement): boolean {
  return root.dataset.trialIndex === "done" || trialItems(root).length === 10;
}

interface TrialRecord {
  participantId: string;
  excluded: boolean;
  complete: boolean;
  responses: { phase: string; isCatch: boolean; correct: boolean }[];
}

async function exportedSession(pid: string): Promise<TrialRecord> {
  const text = await liveApi().exportText("trials");
  const record = text
    .split("\n")
    .filter((line) => line !== "" && !line.startsWith("#"))
    .map((line) => JSON.parse(line) as TrialRecord)
    .find((entry) => entry.participantId === pid);
  if (record === undefined) {
    throw new Error(`no exported session for ${pid}`);
  }
  return record;
}

/** Play a full 31-trial session, always clicking item 0 except on the
 * catch trial, where `pickOnCatch` chooses. Returns whether at least
 * one practice answer was wrong (expected: clicking blind misses). */
async function runSession(
  pid: string,
  pickOnCatch: (items: HTMLElement[]) => HTMLElement,
): Promise<{ sawWrongPractice: boolean; practiceTrials: number; testTrials: number }> {
  const api = liveApi();
  const root = freshRoot();
  await renderTrialView(root, api, pid);
  let sawWrongPractice = false;
  let practiceTrials = 0;
  let testTrials = 0;

  for (let guard = 0; guard < 40; guard++) {
    await until(() => trialReady(root));
    if (root.dataset.trialIndex === "done") break;
    const index = Number(root.dataset.trialIndex);
    const phase = root.dataset.phase;
    const items = trialItems(root);
    expect(items).toHaveLength(10);

    const descriptionText = (query(root, ".description").textContent ?? "").trim();
    const isCatchLike = phase === "test" && descriptionText === CATCH_DESCRIPTION;
    const chosen = isCatchLike ? pickOnCatch(items) : items[0]!;
    click(chosen);

    if (phase === "practice") {
      practiceTrials += 1;
      await until(() => !query<HTMLElement>(root, ".feedback").hidden);
      const highlighted = root.querySelectorAll(".trial-item.correct-choice");
      expect(highlighted.length).toBe(1);
      if ((query(root, ".feedback").textContent ?? "").includes("Not quite")) {
        sawWrongPractice = true;
        expect(highlighted[0]).not.toBe(chosen);
      } else {
        expect(highlighted[0]).toBe(chosen);
      }
      click(query(root, ".next-btn"));
    } else {
      testTrials += 1;
      // Test trials advance silently: no feedback line, no next button.
      expect(query<HTMLElement>(root, ".feedback").hidden).toBe(true);
    }
    await until(
      () => root.dataset.trialIndex === "done" || root.dataset.trialIndex === String(index + 1),
    );
  }

  expect(root.dataset.trialIndex).toBe("done");
  expect(query(root, ".status").textContent).toContain("Session complete");
  return { sawWrongPractice, practiceTrials, testTrials };
}

describe("trial view", () => {
  it("renders ten candidates per trial and resumes after a reload", async () => {
    const api = liveApi();
    const root = freshRoot();
    await renderTrialView(root, api, "p-resume");
    await until(() => trialReady(root));

    expect(root.dataset.trialIndex).toBe("0");
    expect(root.dataset.phase).toBe("practice");
    const items = trialItems(root);
    expect(items).toHaveLength(10);
    for (const item of items) {
      expect(item.querySelectorAll("path[data-piece]")).toHaveLength(7);
      expect(item.dataset.tangramId).toBeTruthy();
    }

    // Answer the first trial, then "reload" into a fresh root: the
    // server-held session resumes at the next unanswered trial.
    click(items[0]!);
    await until(() => !query<HTMLElement>(root, ".feedback").hidden);
    click(query(root, ".next-btn"));
    await until(() => root.dataset.trialIndex === "1");

    const reloaded = freshRoot();
    await renderTrialView(reloaded, api, "p-resume");
    await until(() => trialReady(reloaded));
    expect(reloaded.dataset.trialIndex).toBe("1");
  });

  it("colors part description spans in palette order in the parts+color condition", async () => {
    const api = liveApi();
    let pid = "";
    for (let i = 0; i < 40 && pid === ""; i++) {
      const candidate = `p-color-${i}`;
      const info = await api.startSession(candidate);
      if (info.condition.text === "parts" && info.condition.image === "color") {
        pid = candidate;
      }
    }
    expect(pid).not.toBe("");

    const root = freshRoot();
    await renderTrialView(root, api, pid);
    await until(() => trialReady(root));

    const colored = [...root.querySelectorAll<HTMLElement>(".description span")].filter(
      (span) => span.dataset.partColor !== undefined,
    );
    expect(colored.length).toBeGreaterThan(0);
    expect(colored.map((span) => span.dataset.partColor)).toEqual([
      ...PART_COLOR_ORDER.slice(0, colored.length),
    ]);
    for (const span of colored) {
      expect(span.style.color).toBe(span.dataset.partColor);
    }

    // Candidate images are recolored from the delivered color maps.
    const palette: readonly string[] = PART_COLOR_ORDER;
    for (const item of trialItems(root)) {
      const fills = [...item.querySelectorAll("path[data-piece]")].map((path) =>
        path.getAttribute("fill"),
      );
      expect(fills).toHaveLength(7);
      expect(fills.some((fill) => palette.includes(fill ?? ""))).toBe(true);
    }
  });

  it("gives practice feedback, runs tests silently, and excludes catch failures", async () => {
    const outcome = await runSession("p-catch-fail", (items) => {
      const wrong = items.find((item) => item.dataset.tangramId !== CATCH_DESCRIPTION);
      expect(wrong).toBeDefined();
      return wrong!;
    });
    expect(outcome.practiceTrials).toBe(10);
    expect(outcome.testTrials).toBe(21);
    expect(outcome.sawWrongPractice).toBe(true);

    const record = await exportedSession("p-catch-fail");
    expect(record.complete).toBe(true);
    expect(record.excluded).toBe(true);
    expect(record.responses).toHaveLength(31);
    const catchResponses = record.responses.filter((response) => response.isCatch);
    expect(catchResponses).toHaveLength(1);
    expect(catchResponses[0]!.correct).toBe(false);
    expect(record.responses.filter((response) => response.phase === "practice")).toHaveLength(10);
  });

  it("keeps catch-passing sessions included", async () => {
    await runSession("p-catch-pass", (items) => {
      const square = items.find((item) => item.dataset.tangramId === CATCH_DESCRIPTION);
      expect(square).toBeDefined();
      return square!;
    });

    const record = await exportedSession("p-catch-pass");
    expect(record.complete).toBe(true);
    expect(record.excluded).toBe(false);
    const catchResponses = record.responses.filter((response) => response.isCatch);
    expect(catchResponses).toHaveLength(1);
    expect(catchResponses[0]!.correct).toBe(true);
  });
});
