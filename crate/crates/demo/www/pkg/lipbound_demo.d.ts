/* tslint:disable */
/* eslint-disable */

export function catalog(): string;

/**
 * Bound curves `f(anchor) + bound(anchor -> x)` across a 1-D interval.
 */
export function envelope(_function: string, bx: string, anchor: number, samples: number): string;

export function heatmap(_function: string, bx: string, resolution: number): string;

export function minimize_trace(_function: string, bx: string, tol: number, budget: number): string;

/**
 * Linear and quadratic enclosures on a `2^depth` tiling of a 2-D box.
 */
export function tiles(_function: string, bx: string, depth: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly catalog: () => [number, number];
    readonly envelope: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly heatmap: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly minimize_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly tiles: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
