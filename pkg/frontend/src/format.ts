/** Display formatting. Values pass through untouched except for rounding. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function kg(value: number): string {
  return `${value.toFixed(3)} kg`;
}

export function millimeters(meters: number): string {
  return `${Math.round(meters * 1000)} mm`;
}

export function milliampHours(value: number): string {
  return `${Math.round(value)} mAh`;
}

export function volts(value: number): string {
  return `${value.toFixed(1)} V`;
}

export function amps(value: number): string {
  return `${value.toFixed(2)} A`;
}

export function minutes(value: number): string {
  return `${value.toFixed(2)} min`;
}

export function objective(value: number): string {
  return value.toFixed(4);
}

export function indexValue(value: number): string {
  return Number(value.toPrecision(4)).toString();
}

export function batteryLabel(voltage: number, capacity: number): string {
  return `${volts(voltage)} ${milliampHours(capacity)}`;
}
