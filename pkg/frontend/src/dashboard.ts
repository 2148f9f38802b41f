import { ApiClient } from "./api";
import type { Progress, Tip } from "./types";

export type DashboardData = {
  tip: Tip;
  progress: Progress;
};

export async function loadDashboard(api: ApiClient): Promise<DashboardData> {
  const [tip, progress] = await Promise.all([api.tip(), api.progress()]);
  return { tip, progress };
}
