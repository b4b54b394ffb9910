// WebSocket session client: connects, inits a preset, queues the latest
// tick for the render loop, tracks server sequence numbers, and flips the
// reconnect banner when the link drops (the view stays frozen on the last
// tick until the session is re-established).

import {
  CommandPayload,
  MetricsWire,
  ProtocolError,
  SequenceTracker,
  TickRecordWire,
  makeClientMessage,
  parseServerMessage,
} from "./protocol.js";

export type ConnectionState = "connecting" | "live" | "disconnected";

export interface ClientEvents {
  onState?: (state: ConnectionState) => void;
  onError?: (code: string, detail: string) => void;
}

const RECONNECT_DELAY_MS = 2000;

export class SessionClient {
  latestTick: TickRecordWire | null = null;
  latestMetrics: MetricsWire | null = null;
  state: ConnectionState = "connecting";

  private ws: WebSocket | null = null;
  private seq = 0;
  private tracker = new SequenceTracker();
  private closed = false;

  constructor(
    private url: string,
    private preset: string,
    private events: ClientEvents = {},
  ) {}

  connect(): void {
    this.closed = false;
    this.open();
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }

  setMode(mode: "direct" | "pid"): void {
    this.sendRaw(makeClientMessage("mode", this.seq++, { mode }));
  }

  sendCommand(payload: CommandPayload): void {
    this.sendRaw(makeClientMessage("command", this.seq++, { ...payload }));
  }

  private open(): void {
    this.setState("connecting");
    this.tracker.reset();
    const ws = new WebSocket(this.url);
    this.ws = ws;

    ws.onopen = () => {
      ws.send(makeClientMessage("init", this.seq++, { preset: this.preset }));
      this.setState("live");
    };
    ws.onmessage = (ev) => this.handleMessage(String(ev.data));
    ws.onclose = () => {
      if (this.closed) {
        return;
      }
      this.setState("disconnected");
      setTimeout(() => {
        if (!this.closed) {
          this.open();
        }
      }, RECONNECT_DELAY_MS);
    };
  }

  private handleMessage(raw: string): void {
    let msg;
    try {
      msg = parseServerMessage(raw);
      this.tracker.expect(msg.seq);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.events.onError?.("protocol", err.message);
        return;
      }
      throw err;
    }
    if (msg.type === "tick") {
      this.latestTick = msg.record;
    } else if (msg.type === "metrics") {
      this.latestMetrics = msg.metrics;
    } else {
      this.events.onError?.(msg.code, msg.detail);
    }
  }

  private sendRaw(text: string): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(text);
    }
  }

  private setState(state: ConnectionState): void {
    this.state = state;
    this.events.onState?.(state);
  }
}
