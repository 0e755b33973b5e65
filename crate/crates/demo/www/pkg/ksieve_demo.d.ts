/* tslint:disable */
/* eslint-disable */

/**
 * `∧`, `∨`, `⇒` or `¬` (`op` = `meet`, `join`, `implies`, `not`) of sieves
 * on a `k`-point spectrum, each given by `;`-separated 1-based generating
 * partitions (or `top`). `not` ignores `right`.
 */
export function heyting(k: number, op: string, left: string, right: string, mode: string): string;

/**
 * The bundled 18-vector contexts, as lists of ray names.
 */
export function ks_contexts(): string;

/**
 * Searches the subfamily of the 18-vector contexts whose bits are set in
 * `enabled` for a two-valued colouring.
 */
export function ks_search(enabled: number): string;

/**
 * Evaluates `ν^ψ(A ∈ Δ)` on the spin-1 system for the real state
 * `(sin θ cos φ, cos θ, sin θ sin φ)`. `operator` is `Sx`, `Sz` or `Sx2`;
 * bit `i` of `mask` selects the `i`-th smallest eigenvalue.
 */
export function spin_one_sieve(operator: string, mask: number, theta: number, phi: number, mode: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly heyting: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly ks_contexts: () => [number, number];
    readonly ks_search: (a: number) => [number, number];
    readonly spin_one_sieve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
