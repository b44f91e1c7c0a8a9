"""HTTP clients against a local stub server (no external network)."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from paraprobe.harness.backends import HttpModelClient, ModelUnavailable
from paraprobe.harness.checker import CheckerUnavailable, HttpChecker
from paraprobe.harness.profiles import build_prompt, get_profile


class StubHandler(BaseHTTPRequestHandler):
    fail_first = 0  # number of initial requests to 500

    def log_message(self, *args):
        pass

    def do_POST(self):
        cls = type(self)
        if cls.fail_first > 0:
            cls.fail_first -= 1
            self.send_response(500)
            self.end_headers()
            return
        length = int(self.headers["Content-Length"])
        body = json.loads(self.rfile.read(length))
        if self.path == "/compile":
            payload = {
                "success": "SimpleGroup" not in body["unit"],
                "diagnostics": []
                if "SimpleGroup" not in body["unit"]
                else [{"severity": "error", "message": "unknown identifier 'SimpleGroup'"}],
                "elapsed": 0.01,
            }
        elif self.path == "/prove":
            payload = {"success": body["source"] == body["target"]}
        elif self.path == "/v1/chat/completions":
            payload = {"choices": [{"message": {"content": "theorem t : 1 = 1 := sorry"}}]}
        elif self.path == "/v1/completions":
            payload = {"choices": [{"text": "theorem t : 2 = 2 := sorry"}]}
        else:
            self.send_response(404)
            self.end_headers()
            return
        data = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


@pytest.fixture()
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    StubHandler.fail_first = 0
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_http_checker_compile_and_prove(stub_server):
    checker = HttpChecker(stub_server, retries=2, backoff=0.01)
    good = checker.compile("theorem t : 1 = 1 := sorry")
    assert good.success and good.elapsed == 0.01
    bad = checker.compile("theorem t : SimpleGroup := sorry")
    assert not bad.success
    assert "unknown identifier" in bad.diagnostics[0].message
    assert checker.prove("a", "a") and not checker.prove("a", "b")


def test_http_checker_retries_then_succeeds(stub_server):
    StubHandler.fail_first = 1
    checker = HttpChecker(stub_server, retries=3, backoff=0.01)
    assert checker.compile("theorem t : 1 = 1 := sorry").success


def test_http_checker_unavailable():
    checker = HttpChecker("http://127.0.0.1:1", retries=2, backoff=0.01)
    with pytest.raises(CheckerUnavailable):
        checker.compile("theorem t : 1 = 1 := sorry")


def test_http_model_chat_and_completion(stub_server):
    chat = HttpModelClient(base_url=stub_server, retries=2, backoff=0.01)
    payload = build_prompt(get_profile("kimina"), "Prove that $1 = 1$.")
    assert chat.complete(payload) == "theorem t : 1 = 1 := sorry"
    completion = build_prompt(get_profile("deepseek_prover_v2"), "A claim.")
    assert chat.complete(completion) == "theorem t : 2 = 2 := sorry"


def test_http_model_unavailable():
    client = HttpModelClient(base_url="http://127.0.0.1:1", retries=2, backoff=0.01)
    payload = build_prompt(get_profile("kimina"), "x")
    with pytest.raises(ModelUnavailable):
        client.complete(payload)


def test_http_model_requires_endpoint(monkeypatch):
    monkeypatch.delenv("PARAPROBE_MODEL_URL", raising=False)
    with pytest.raises(ModelUnavailable):
        HttpModelClient()
