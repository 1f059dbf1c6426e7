/** Inline-SVG helpers: the service renders one path per puzzle piece
 * and the client addresses those paths for hit-testing and coloring.
 * The client never re-implements any geometry. */

/**
 * Inject a stimulus SVG into `container` and return its piece paths
 * keyed by piece id. Path ids are rewritten to `data-piece` attributes
 * so one document can hold many stimuli without duplicate ids.
 */
export function injectStimulus(
  container: HTMLElement,
  svgText: string,
): Map<number, SVGPathElement> {
  container.innerHTML = svgText;
  const svg = container.querySelector("svg");
  if (svg === null) {
    throw new Error("stimulus is not an SVG document");
  }
  const pieces = new Map<number, SVGPathElement>();
  for (const path of Array.from(svg.querySelectorAll<SVGPathElement>("path[id^='piece-']"))) {
    const pieceId = Number(path.id.slice("piece-".length));
    path.removeAttribute("id");
    path.setAttribute("data-piece", String(pieceId));
    pieces.set(pieceId, path);
  }
  return pieces;
}

/** Recolor piece fills from a service-delivered color map. */
export function applyColorMap(
  pieces: Map<number, SVGPathElement>,
  colorMap: Record<string, string>,
): void {
  for (const [pieceId, path] of pieces) {
    const color = colorMap[String(pieceId)];
    if (color !== undefined) {
      path.setAttribute("fill", color);
    }
  }
}
