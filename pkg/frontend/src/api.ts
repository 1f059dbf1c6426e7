/** Typed client for the collection service HTTP API. */

export interface AssignedTask {
  tangramId: string;
  stimulusUrl: string;
}

export interface NoTask {
  tangramId: null;
  reason: string;
}

export type TaskResponse = AssignedTask | NoTask;

export interface PartPayload {
  pieceIds: number[];
  label: string;
}

export interface SessionInfo {
  participantId: string;
  condition: { text: string; image: string };
  practiceCount: number;
  testCount: number;
  trialCount: number;
}

/** [text, colorName | null]; colored spans are part descriptions. */
export type Span = [string, string | null];

export interface TrialItem {
  tangramId: string;
  colorMap: Record<string, string>;
}

export interface Trial {
  done: false;
  index: number;
  phase: "practice" | "test";
  description: string;
  descriptionSpans: Span[];
  items: TrialItem[];
  k: number;
}

export interface SessionDone {
  done: true;
  excluded: boolean;
}

export interface Feedback {
  phase: string;
  accepted: boolean;
  remaining: number;
  correct?: boolean;
  correctIndex?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    reason: string,
  ) {
    super(reason);
    this.name = "ApiError";
  }
}

export class Api {
  constructor(readonly base: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) {
      let reason = `${resp.status} ${resp.statusText}`;
      try {
        const body = await resp.json();
        if (typeof body?.error === "string") reason = body.error;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(resp.status, reason);
    }
    return resp;
  }

  private async getJson<T>(path: string): Promise<T> {
    return (await this.request(path)).json() as Promise<T>;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return resp.json() as Promise<T>;
  }

  annotationTask(workerId: string): Promise<TaskResponse> {
    return this.getJson(`/api/annotation-task?workerId=${encodeURIComponent(workerId)}`);
  }

  submitAnnotation(
    workerId: string,
    tangramId: string,
    whole: string,
    parts: PartPayload[],
  ): Promise<{ accepted: boolean }> {
    return this.postJson("/api/annotations", { workerId, tangramId, whole, parts });
  }

  qualifyWorker(workerId: string, qualified: boolean): Promise<{ workerId: string }> {
    return this.postJson("/api/admin/qualify", { workerId, qualified });
  }

  startSession(participantId: string): Promise<SessionInfo> {
    return this.postJson("/api/trial-session", { participantId });
  }

  nextTrial(participantId: string): Promise<Trial | SessionDone> {
    return this.getJson(`/api/trial-session/${encodeURIComponent(participantId)}/next`);
  }

  submitResponse(
    participantId: string,
    trialIndex: number,
    chosenItemIndex: number,
  ): Promise<Feedback> {
    return this.postJson(`/api/trial-session/${encodeURIComponent(participantId)}/response`, {
      trialIndex,
      chosenItemIndex,
    });
  }

  async stimulusSvg(tangramId: string): Promise<string> {
    const resp = await this.request(`/stimuli/${encodeURIComponent(tangramId)}.svg`);
    return resp.text();
  }

  async exportText(kind: "annotations" | "trials"): Promise<string> {
    const resp = await this.request(`/api/export/${kind}`);
    return resp.text();
  }
}
