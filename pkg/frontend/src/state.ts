/** Session view state and the reducer driving the dashboard.
 *
 * The view is re-derivable from server state at any time; the reducer only
 * guards interaction rules: one in-flight step per session, no actions on an
 * accepted session, metric series aligned and strictly increasing in K.
 */

import type { Report } from "./api.js";

export interface SessionView {
  id: string;
  status: "active" | "accepted";
  reports: Report[];
  acceptedK: number | null;
  inFlight: boolean;
  error: string | null;
  /** optional 2D coordinates for scatter rendering */
  points: Array<[number, number]> | null;
}

export type Action =
  | { type: "step-start" }
  | { type: "step-success"; report: Report }
  | { type: "step-error"; message: string }
  | { type: "accept-success"; K: number }
  | { type: "accept-error"; message: string }
  | { type: "clear-error" };

export function initialView(
  id: string,
  points: Array<[number, number]> | null = null,
): SessionView {
  return {
    id,
    status: "active",
    reports: [],
    acceptedK: null,
    inFlight: false,
    error: null,
    points,
  };
}

export function canStep(view: SessionView): boolean {
  return view.status === "active" && !view.inFlight;
}

export function reduce(view: SessionView, action: Action): SessionView {
  switch (action.type) {
    case "step-start":
      if (!canStep(view)) return view; // single-flight / closed-session guard
      return { ...view, inFlight: true, error: null };
    case "step-success": {
      if (!view.inFlight) return view;
      const next = { ...view, inFlight: false, reports: [...view.reports, action.report] };
      assertAligned(next);
      return next;
    }
    case "step-error":
      return { ...view, inFlight: false, error: action.message };
    case "accept-success":
      return { ...view, status: "accepted", acceptedK: action.K, error: null };
    case "accept-error":
      return { ...view, error: action.message };
    case "clear-error":
      return { ...view, error: null };
  }
}

/** Series must share one strictly increasing K axis starting at 2. */
export function assertAligned(view: SessionView): void {
  view.reports.forEach((report, i) => {
    if (report.K !== 2 + i) {
      throw new Error(`misaligned series: report ${i} has K=${report.K}`);
    }
  });
}
