/* tslint:disable */
/* eslint-disable */

/**
 * Same request and response shapes as the service's `POST /compose`.
 */
export function compose(request: string): string;

/**
 * The four fully-marked membership-bar glyphs over `{1..universe}` with
 * `in-a` read as `a` and `in-b` as `b`: each glyph's SVG, literals and
 * denotation, plus whether the four denotations partition the carrier.
 */
export function four_classes(input: string): string;

/**
 * Reads a glyph literal such as `hausdorff(center=dot)`.
 */
export function lookup(literal: string, size: number): string;

/**
 * Radicals with their regions and applicable rules.
 */
export function radicals(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly compose: (a: number, b: number) => [number, number];
    readonly four_classes: (a: number, b: number) => [number, number];
    readonly lookup: (a: number, b: number, c: number) => [number, number];
    readonly radicals: () => [number, number];
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
