// The single affine world-to-screen transform every rendered coordinate
// passes through: uniform scale, translation, y-axis flip (screen y grows
// downward, world y is the human's facing direction).

export interface Affine {
  scale: number;   // pixels per meter
  cx: number;      // screen x of world origin
  cy: number;      // screen y of world origin
}

export function fitView(
  width: number,
  height: number,
  worldRadius: number,
  margin = 20,
): Affine {
  const usable = Math.min(width, height) / 2 - margin;
  return {
    scale: usable / worldRadius,
    cx: width / 2,
    cy: height / 2,
  };
}

export function toScreen(a: Affine, wx: number, wy: number): [number, number] {
  return [a.cx + wx * a.scale, a.cy - wy * a.scale];
}

export function toWorld(a: Affine, sx: number, sy: number): [number, number] {
  return [(sx - a.cx) / a.scale, (a.cy - sy) / a.scale];
}
