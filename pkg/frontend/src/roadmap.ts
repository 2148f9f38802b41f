/** Client-side input checks mirroring the service's validation, so the
 * submit button can stay disabled with an inline message instead of
 * round-tripping an invalid request. */
export function validateRoadmapInput(timelineWeeks: number, topics: string[]): string | null {
  if (!Number.isInteger(timelineWeeks) || timelineWeeks < 1) {
    return "timeline must be a whole number of weeks, at least 1";
  }
  if (topics.map((t) => t.trim()).filter((t) => t.length > 0).length === 0) {
    return "add at least one topic";
  }
  return null;
}

export function parseTopics(raw: string): string[] {
  return raw
    .split(",")
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
}
