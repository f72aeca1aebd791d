/** Bounding-box overlay geometry and canvas drawing.
 * Scaling is pure so it can be verified to sub-pixel tolerance. */

export interface Box {
  xMin: number;
  yMin: number;
  xMax: number;
  yMax: number;
}

export interface LabeledBox {
  box: Box;
  label: string;
}

export interface DisplayScale {
  naturalWidth: number;
  naturalHeight: number;
  displayWidth: number;
  displayHeight: number;
}

export interface Rect {
  left: number;
  top: number;
  width: number;
  height: number;
}

/** Map image-pixel corners to display coordinates. */
export function scaleBox(box: Box, scale: DisplayScale): Rect {
  const sx = scale.displayWidth / scale.naturalWidth;
  const sy = scale.displayHeight / scale.naturalHeight;
  return {
    left: box.xMin * sx,
    top: box.yMin * sy,
    width: (box.xMax - box.xMin) * sx,
    height: (box.yMax - box.yMin) * sy,
  };
}

const PALETTE = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6"];

export function colorFor(label: string): string {
  let hash = 0;
  for (let i = 0; i < label.length; i++) {
    hash = (hash * 31 + label.charCodeAt(i)) | 0;
  }
  return PALETTE[Math.abs(hash) % PALETTE.length];
}

/** Draw boxes (scaled) with category labels onto a canvas context. */
export function drawOverlay(
  ctx: CanvasRenderingContext2D,
  boxes: LabeledBox[],
  scale: DisplayScale
): void {
  ctx.lineWidth = 2;
  ctx.font = "12px sans-serif";
  ctx.textBaseline = "top";
  for (const { box, label } of boxes) {
    const rect = scaleBox(box, scale);
    const color = colorFor(label);
    ctx.strokeStyle = color;
    ctx.strokeRect(rect.left, rect.top, rect.width, rect.height);
    const text = ` ${label} `;
    const width = ctx.measureText(text).width;
    ctx.fillStyle = color;
    ctx.fillRect(rect.left, Math.max(0, rect.top - 14), width, 14);
    ctx.fillStyle = "#ffffff";
    ctx.fillText(text, rect.left, Math.max(0, rect.top - 13));
  }
}
