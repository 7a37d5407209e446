/** Label download: same node,label CSV the command-line client writes. */

import type { Labels } from "./api.js";

export function labelsToCsv(labels: Labels): string {
  const lines = ["node,label"];
  labels.labels.forEach((label, node) => {
    lines.push(`${node},${label}`);
  });
  return lines.join("\n") + "\n";
}
