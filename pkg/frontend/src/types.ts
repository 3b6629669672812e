/** Wire types for the design service. Field names match the JSON exactly. */

export interface ComboRef {
  motor_id: string;
  esc_id: string;
  prop_id: string;
}

export interface BatteryOut {
  voltage: number;
  capacity: number;
  max_discharge: number;
  mass: number;
}

export interface AirframeOut {
  diameter: number;
  mass: number;
}

export interface Candidate {
  combo: ComboRef;
  achieved_time: number;
  achieved_payload: number;
  achieved_ratio: number;
  max_vertical_accel: number;
  copter_mass: number;
  battery: BatteryOut;
  airframe: AirframeOut;
  hover_current: number;
  indexes: number[];
  objective: number;
  density_converted: boolean;
}

export interface DesignResponse {
  candidates: Candidate[];
  air_density: number;
  considered: number;
  returned: number;
  db_fingerprint: string;
  timing_ms?: number;
}

export interface DefaultsOverride {
  airframe_ratio?: number;
  discharge_ratio?: number;
  other_current?: number;
  battery_margin?: number;
  prop_gap?: number;
  gravity?: number;
  screening_tolerance?: number;
}

export interface DesignRequest {
  hover_time: number;
  payload: number;
  thrust_ratio: number;
  rotor_count: number;
  air_density?: number;
  altitude?: number;
  battery_density: number;
  screening_mode?: "time" | "payload" | "ratio";
  layout?: "common" | "coaxial";
  top_n?: number;
  weights?: number[];
  defaults?: DefaultsOverride;
}

export interface FieldErrorDetail {
  field: string;
  message: string;
}

export interface ErrorBody {
  error: {
    code: string;
    message: string;
    details: unknown;
  };
}

export interface InfeasibleDetails {
  reasons: Record<string, string>;
  nearest_miss?: string;
}

export function comboKey(combo: ComboRef): string {
  return `${combo.motor_id}+${combo.esc_id}+${combo.prop_id}`;
}
