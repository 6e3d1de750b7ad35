/**
 * Export and publish controls: story downloads (HTML/PDF/JSON), and per
 * component CSV, SVG, raster image, and embed-snippet copy.
 */

import { ApiClient } from "./api";

export function triggerDownload(blob: Blob, filename: string): void {
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  document.body.appendChild(link);
  link.click();
  link.remove();
  setTimeout(() => URL.revokeObjectURL(url), 1000);
}

export async function downloadStory(
  api: ApiClient, storyId: string, format: "html" | "pdf" | "json", live = false,
): Promise<void> {
  const response = await fetch(api.storyExportUrl(storyId, format, live));
  triggerDownload(await response.blob(), `${storyId}.${format}`);
}

export function serializeSvg(svg: SVGSVGElement): string {
  return new XMLSerializer().serializeToString(svg);
}

/**
 * Rasterize a rendered chart to PNG via an offscreen canvas. Resolves to
 * null when the environment has no 2d canvas (the caller falls back to
 * offering the SVG itself).
 */
export function rasterizeSvg(
  svg: SVGSVGElement, width = 640, height = 360,
): Promise<Blob | null> {
  const markup = serializeSvg(svg);
  const canvas = document.createElement("canvas");
  canvas.width = width * 2;  // export at 2x for crisp charts
  canvas.height = height * 2;
  const context = canvas.getContext("2d");
  if (!context) return Promise.resolve(null);
  const image = new Image();
  const source = `data:image/svg+xml;charset=utf-8,${encodeURIComponent(markup)}`;
  return new Promise((resolve) => {
    image.onload = () => {
      context.drawImage(image, 0, 0, canvas.width, canvas.height);
      canvas.toBlob((blob) => resolve(blob), "image/png");
    };
    image.onerror = () => resolve(null);
    image.src = source;
  });
}

export async function downloadComponentImage(
  svg: SVGSVGElement, filename: string,
): Promise<"png" | "svg"> {
  const raster = await rasterizeSvg(svg);
  if (raster && raster.size > 0) {
    triggerDownload(raster, `${filename}.png`);
    return "png";
  }
  triggerDownload(
    new Blob([serializeSvg(svg)], { type: "image/svg+xml" }), `${filename}.svg`,
  );
  return "svg";
}

export async function copyEmbedSnippet(
  api: ApiClient, storyId: string, componentId: string,
): Promise<string> {
  const snippet = api.embedSnippet(storyId, componentId);
  if (navigator.clipboard?.writeText) {
    await navigator.clipboard.writeText(snippet);
  }
  return snippet;
}
