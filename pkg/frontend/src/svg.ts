/**
 * Minimal SVG string building: elements, escaping, and the document shell.
 */

export type Attrs = Record<string, string | number>;

export function escapeText(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function attrString(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([key, value]) => ` ${key}="${escapeText(String(value))}"`)
    .join("");
}

/** One element with children already rendered to strings. */
export function el(tag: string, attrs: Attrs, ...children: string[]): string {
  const open = `<${tag}${attrString(attrs)}`;
  if (children.length === 0) return `${open}/>`;
  return `${open}>${children.join("")}</${tag}>`;
}

/** A text node element with escaped content. */
export function textEl(attrs: Attrs, content: string): string {
  return el("text", attrs, escapeText(content));
}

/** Full standalone SVG document. */
export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    el("rect", { x: 0, y: 0, width, height, fill: "white" }),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

/** Round coordinates so output is compact and stable across platforms. */
export function px(value: number): number {
  return Math.round(value * 100) / 100;
}
