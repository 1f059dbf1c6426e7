/** Two-phase annotation view: name the whole shape, then segment it
 * into named parts by clicking pieces. Mirrors the service's submit
 * preconditions so the UI never sends a payload the service rejects. */

import { Api, PartPayload, TaskResponse } from "./api.js";
import { partColor } from "./colors.js";
import { el, messageOf } from "./dom.js";
import { injectStimulus } from "./svgPieces.js";

export const ALL_PIECE_IDS: readonly number[] = [1, 2, 3, 4, 5, 6, 7];

/** Placeholder label for parts the annotator cannot name. */
export const UNKNOWN_LABEL = "UNKNOWN";

/** Fill for pieces not yet assigned to a part (grayscale stimulus). */
export const UNASSIGNED_FILL = "#4a4a4a";

export interface PartDraft {
  pieceIds: number[];
  label: string;
}

export interface AnnotationDraft {
  tangramId: string;
  wholeText: string;
  parts: PartDraft[];
  remainingPieceIds: number[];
}

export function newDraft(tangramId: string): AnnotationDraft {
  return {
    tangramId,
    wholeText: "",
    parts: [],
    remainingPieceIds: [...ALL_PIECE_IDS],
  };
}

/** Submit is allowed once every piece belongs to a labeled part and
 * the whole-shape description is non-empty. */
export function canSubmit(draft: AnnotationDraft): boolean {
  return (
    draft.remainingPieceIds.length === 0 &&
    draft.wholeText.trim().length > 0 &&
    draft.parts.length > 0 &&
    draft.parts.every((part) => part.label.trim().length > 0)
  );
}

export function commitPart(draft: AnnotationDraft, pieceIds: number[], label: string): void {
  if (pieceIds.length === 0) {
    throw new Error("select at least one piece");
  }
  if (label.trim().length === 0) {
    throw new Error("name the selected part (or mark it UNKNOWN)");
  }
  for (const pieceId of pieceIds) {
    if (!draft.remainingPieceIds.includes(pieceId)) {
      throw new Error(`piece ${pieceId} is already part of another part`);
    }
  }
  draft.parts.push({ pieceIds: [...pieceIds].sort((a, b) => a - b), label: label.trim() });
  draft.remainingPieceIds = draft.remainingPieceIds.filter((p) => !pieceIds.includes(p));
}

export function extendPart(draft: AnnotationDraft, index: number, pieceIds: number[]): void {
  const part = draft.parts[index];
  if (part === undefined) {
    throw new Error(`no part at index ${index}`);
  }
  if (pieceIds.length === 0) {
    throw new Error("select at least one piece");
  }
  for (const pieceId of pieceIds) {
    if (!draft.remainingPieceIds.includes(pieceId)) {
      throw new Error(`piece ${pieceId} is already part of another part`);
    }
  }
  part.pieceIds = [...part.pieceIds, ...pieceIds].sort((a, b) => a - b);
  draft.remainingPieceIds = draft.remainingPieceIds.filter((p) => !pieceIds.includes(p));
}

export function deletePart(draft: AnnotationDraft, index: number): void {
  const [removed] = draft.parts.splice(index, 1);
  if (removed === undefined) {
    throw new Error(`no part at index ${index}`);
  }
  draft.remainingPieceIds = [...draft.remainingPieceIds, ...removed.pieceIds].sort(
    (a, b) => a - b,
  );
}

export function toPartPayloads(draft: AnnotationDraft): PartPayload[] {
  return draft.parts.map((part) => ({ pieceIds: [...part.pieceIds], label: part.label }));
}

export async function renderAnnotationView(
  root: HTMLElement,
  api: Api,
  workerId: string,
): Promise<void> {
  root.innerHTML = "";
  root.className = "annotation-view";
  const status = el("p", "status");
  root.appendChild(status);

  let task: TaskResponse;
  try {
    task = await api.annotationTask(workerId);
  } catch (err) {
    status.textContent = messageOf(err);
    return;
  }
  if (task.tangramId === null) {
    status.textContent = task.reason;
    return;
  }
  status.textContent = `Tangram ${task.tangramId}`;

  const draft = newDraft(task.tangramId);
  const selection = new Set<number>();

  const stimulus = el("div", "stimulus");
  const pieces = injectStimulus(stimulus, await api.stimulusSvg(task.tangramId));
  root.appendChild(stimulus);

  const wholeSection = el("section", "phase-whole");
  wholeSection.appendChild(el("p", "prompt", "This shape, as a whole, looks like ____"));
  const wholeInput = el("input", "whole-input");
  const continueBtn = el("button", "continue-btn", "Continue");
  continueBtn.disabled = true;
  wholeSection.append(wholeInput, continueBtn);
  root.appendChild(wholeSection);

  const partsSection = el("section", "phase-parts");
  partsSection.hidden = true;
  partsSection.appendChild(
    el("p", "prompt", "The part(s) you selected look(s) like ____"),
  );
  const labelInput = el("input", "part-label-input");
  const unknownBtn = el("button", "unknown-btn", "Can't name it");
  const addBtn = el("button", "add-part-btn", "Add part");
  const partsList = el("ul", "parts-list");
  const submitBtn = el("button", "submit-btn", "Submit annotation");
  submitBtn.disabled = true;
  const error = el("p", "error");
  partsSection.append(labelInput, unknownBtn, addBtn, partsList, submitBtn, error);
  root.appendChild(partsSection);

  const owners = (): Map<number, number> => {
    const map = new Map<number, number>();
    draft.parts.forEach((part, partIndex) => {
      for (const pieceId of part.pieceIds) map.set(pieceId, partIndex);
    });
    return map;
  };

  const paint = (): void => {
    const owned = owners();
    for (const [pieceId, path] of pieces) {
      const partIndex = owned.get(pieceId);
      if (partIndex !== undefined) {
        path.setAttribute("fill", partColor(partIndex));
        path.classList.remove("selected");
      } else {
        path.setAttribute("fill", UNASSIGNED_FILL);
        path.classList.toggle("selected", selection.has(pieceId));
      }
    }
  };

  const refresh = (): void => {
    continueBtn.disabled = draft.wholeText.trim().length === 0;
    submitBtn.disabled = !canSubmit(draft);
  };

  const rebuildParts = (): void => {
    partsList.innerHTML = "";
    draft.parts.forEach((part, partIndex) => {
      const item = el("li", "part-entry");
      item.dataset.part = String(partIndex);
      const label = el("span", "part-label", part.label);
      label.style.color = partColor(partIndex);
      item.appendChild(label);
      item.appendChild(el("span", "part-pieces", ` pieces ${part.pieceIds.join(", ")}`));
      const extendBtn = el("button", "extend-btn", "Add selected pieces");
      extendBtn.addEventListener("click", () => {
        mutate(() => extendPart(draft, partIndex, [...selection].sort((a, b) => a - b)));
      });
      const deleteBtn = el("button", "delete-btn", "Delete");
      deleteBtn.addEventListener("click", () => {
        mutate(() => deletePart(draft, partIndex));
      });
      item.append(extendBtn, deleteBtn);
      partsList.appendChild(item);
    });
  };

  const mutate = (change: () => void): void => {
    error.textContent = "";
    try {
      change();
    } catch (err) {
      error.textContent = messageOf(err);
      return;
    }
    selection.clear();
    labelInput.value = "";
    rebuildParts();
    paint();
    refresh();
  };

  for (const [pieceId, path] of pieces) {
    path.addEventListener("click", () => {
      if (owners().has(pieceId)) return;
      if (selection.has(pieceId)) {
        selection.delete(pieceId);
      } else {
        selection.add(pieceId);
      }
      paint();
    });
  }

  wholeInput.addEventListener("input", () => {
    draft.wholeText = wholeInput.value;
    refresh();
  });

  continueBtn.addEventListener("click", () => {
    if (draft.wholeText.trim().length === 0) return;
    wholeSection.hidden = true;
    partsSection.hidden = false;
  });

  unknownBtn.addEventListener("click", () => {
    labelInput.value = UNKNOWN_LABEL;
  });

  addBtn.addEventListener("click", () => {
    mutate(() => commitPart(draft, [...selection].sort((a, b) => a - b), labelInput.value));
  });

  submitBtn.addEventListener("click", () => {
    void (async () => {
      error.textContent = "";
      if (!canSubmit(draft)) return;
      submitBtn.disabled = true;
      try {
        await api.submitAnnotation(
          workerId,
          draft.tangramId,
          draft.wholeText.trim(),
          toPartPayloads(draft),
        );
      } catch (err) {
        error.textContent = messageOf(err);
        submitBtn.disabled = !canSubmit(draft);
        return;
      }
      status.textContent = "Annotation accepted. Thank you!";
      root.classList.add("submitted");
      partsSection.hidden = true;
    })();
  });

  paint();
  refresh();
}
