import type { ChatEntry } from "./chat";
import type { DashboardData } from "./dashboard";
import type { PublicQuestion, QuizResult, Roadmap } from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderQuestion(
  question: PublicQuestion,
  index: number,
  total: number,
  selected: number | undefined,
): string {
  const options = question.options
    .map((text, i) => {
      const checked = selected === i ? " checked" : "";
      return (
        `<label class="option"><input type="radio" name="option" value="${i}"${checked}>` +
        ` ${escapeHtml(text)}</label>`
      );
    })
    .join("\n");
  return (
    `<p class="counter">Question ${index + 1} of ${total}</p>\n` +
    `<p class="stem" data-question-id="${escapeHtml(question.id)}">${escapeHtml(question.stem)}</p>\n` +
    `<div class="options">\n${options}\n</div>`
  );
}

export function renderResult(result: QuizResult): string {
  const percent = Math.round(result.score_fraction * 100);
  return (
    `<p class="score">Score: ${percent}% (${result.duration_seconds.toFixed(1)}s)</p>\n` +
    `<blockquote class="quote">${escapeHtml(result.quote.text)}</blockquote>\n` +
    `<p class="tally">Points: ${result.points} · Streak: ${result.streak_days} days</p>`
  );
}

export function renderTranscript(transcript: ChatEntry[], banner: string): string {
  const rows = transcript
    .map((entry) => {
      const badge = entry.badge
        ? ` <span class="badge badge-${entry.badge}">${entry.badge}</span>`
        : "";
      return `<div class="msg msg-${entry.role}">${escapeHtml(entry.text)}${badge}</div>`;
    })
    .join("\n");
  const bannerHtml = banner ? `<div class="banner">${escapeHtml(banner)}</div>\n` : "";
  return bannerHtml + rows;
}

export function renderRoadmap(roadmap: Roadmap): string {
  const cards = roadmap.milestones
    .map((m) => {
      const weeks =
        m.start_week === m.end_week
          ? `Week ${m.start_week}`
          : `Weeks ${m.start_week}-${m.end_week}`;
      const lessons = m.lessons.map((l) => `<li>${escapeHtml(l)}</li>`).join("");
      return (
        `<div class="milestone">\n` +
        `<h3>${escapeHtml(m.title)}</h3>\n` +
        `<p class="weeks">${weeks}</p>\n` +
        `<p class="topics">${m.topics.map(escapeHtml).join(", ")}</p>\n` +
        `<ul class="lessons">${lessons}</ul>\n</div>`
      );
    })
    .join("\n");
  return (
    `<p class="plan-header">${roadmap.timeline_weeks}-week ${escapeHtml(roadmap.language)} plan</p>\n` +
    cards
  );
}

export function renderDashboard(data: DashboardData): string {
  const recent = data.progress.history
    .slice(-5)
    .reverse()
    .map(
      (entry) =>
        `<li>${escapeHtml(entry.topic)} (${escapeHtml(entry.difficulty)}): ` +
        `${Math.round(entry.score_fraction * 100)}%</li>`,
    )
    .join("");
  return (
    `<div class="tip">${escapeHtml(data.tip.text)}</div>\n` +
    `<p class="tally">Points: ${data.progress.points} · Streak: ${data.progress.streak_days} days</p>\n` +
    `<ul class="recent">${recent}</ul>`
  );
}
