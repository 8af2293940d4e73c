/** Pseudonymous rater token, persisted locally. No login in v1. */

const STORAGE_KEY = "hcrs-rater-token";

export interface TokenStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const memoryStore = new Map<string, string>();

const memoryStorage: TokenStorage = {
  getItem: (key) => memoryStore.get(key) ?? null,
  setItem: (key, value) => {
    memoryStore.set(key, value);
  },
};

function defaultStorage(): TokenStorage {
  // localStorage is absent under node (tests); fall back to memory
  if (typeof localStorage !== "undefined") return localStorage;
  return memoryStorage;
}

export function newToken(): string {
  return "rater-" + Math.random().toString(36).slice(2, 10);
}

export function getRaterToken(storage: TokenStorage = defaultStorage()): string {
  const existing = storage.getItem(STORAGE_KEY);
  if (existing) return existing;
  const token = newToken();
  storage.setItem(STORAGE_KEY, token);
  return token;
}
