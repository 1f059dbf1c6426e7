/**
 * Fixed palette for part coloring. Parts are colored by position: the
 * first part committed (or the first part mentioned in a description)
 * gets the first color, and so on. The same order is used by the
 * service when it renders colored game items, so text spans and image
 * pieces line up without any negotiation.
 */
export const PART_COLOR_ORDER = [
  "coral",
  "gold",
  "lightskyblue",
  "lightpink",
  "mediumseagreen",
  "darkgrey",
  "lightgrey",
] as const;

export type PartColor = (typeof PART_COLOR_ORDER)[number];

export function partColor(index: number): PartColor {
  const color = PART_COLOR_ORDER[index];
  if (color === undefined) {
    throw new Error(`no color for part index ${index}`);
  }
  return color;
}
