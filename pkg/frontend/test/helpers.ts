import { vi } from "vitest";

export const TASK_I1 = {
  v: 1,
  task_id: "i1:r-test",
  item_id: "i1",
  text: "Take two tablets every morning.",
  source: "Patients are advised to administer two tablets.",
  dimensions: ["clarity", "trustworthiness", "tone", "culture", "actionability"],
  tags: ["too_technical", "missing_information", "poorly_structured"],
  prompts: { clarity: "Was this sentence clear to you?" },
};

export const TASK_I2 = { ...TASK_I1, task_id: "i2:r-test", item_id: "i2", text: "Call your doctor." };

type Handler = (init?: RequestInit) => { status: number; body?: unknown };

/** Route-table fetch stub: "METHOD /path" -> handler. */
export function stubFetch(routes: Record<string, Handler>) {
  const calls: Array<{ key: string; init?: RequestInit }> = [];
  const mock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = new URL(String(input), "http://service.test");
    const key = `${init?.method ?? "GET"} ${url.pathname}`;
    calls.push({ key, init });
    const handler = routes[key];
    if (!handler) throw new TypeError(`no route for ${key}`);
    const { status, body } = handler(init);
    return new Response(body === undefined ? null : JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  });
  vi.stubGlobal("fetch", mock);
  return { mock, calls };
}
