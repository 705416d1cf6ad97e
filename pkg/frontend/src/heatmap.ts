/** Canvas heatmap for the 50x50 probability grids served by get_state. */

/**
 * Map a probability to a grayscale color, darker = higher probability.
 * Values are clamped so the rendered scale never leaves [0, 1].
 */
export function probabilityColor(value: number): string {
  const p = Math.min(1, Math.max(0, value));
  const shade = Math.round(255 * (1 - p));
  return `rgb(${shade}, ${shade}, ${shade})`;
}

export function renderHeatmap(
  canvas: HTMLCanvasElement,
  grid: number[][],
): void {
  const rows = grid.length;
  const cols = rows > 0 ? grid[0].length : 0;
  let ctx: CanvasRenderingContext2D | null = null;
  try {
    ctx = canvas.getContext("2d");
  } catch {
    return; // canvas unsupported (e.g. non-browser DOM)
  }
  if (!ctx || rows === 0 || cols === 0) return;
  const cellW = canvas.width / cols;
  const cellH = canvas.height / rows;
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      ctx.fillStyle = probabilityColor(grid[r][c]);
      // grid row 0 is the lower edge of the domain; canvas y grows downward
      ctx.fillRect(
        c * cellW,
        canvas.height - (r + 1) * cellH,
        Math.ceil(cellW),
        Math.ceil(cellH),
      );
    }
  }
}
