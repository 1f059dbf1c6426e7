import { Api } from "../src/api.js";

export const BASE = `http://127.0.0.1:${process.env.TANGRAM_SERVICE_PORT ?? "8891"}`;

export function liveApi(): Api {
  return new Api(BASE);
}

/** Poll until `condition` holds; view updates land asynchronously
 * after DOM events, so assertions wait instead of assuming. */
export async function until(condition: () => boolean, timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!condition()) {
    if (Date.now() > deadline) {
      throw new Error("condition not met in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}

export function click(target: Element): void {
  target.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

export function setInput(input: HTMLInputElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

export function query<T extends Element>(root: ParentNode, selector: string): T {
  const node = root.querySelector<T>(selector);
  if (node === null) {
    throw new Error(`missing element ${selector}`);
  }
  return node;
}
