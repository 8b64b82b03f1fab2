from __future__ import annotations

import argparse
import sys

import httpx

K5_MINUS_F = {
    "n": 5,
    "edges": [[0, 2], [0, 3], [0, 4], [1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]],
}


def _run(*, base_url: str, samples: int, timeout: float) -> int:
    base_url = base_url.rstrip("/")

    # 采样校验可能较慢，这里给一个更宽松的默认超时
    with httpx.Client(trust_env=False, timeout=timeout) as client:
        health = client.get(f"{base_url}/system/health")
        health.raise_for_status()

        sip = client.post(f"{base_url}/analysis/sip", json={**K5_MINUS_F, "nonedge": [0, 1], "dim": 3})
        sip.raise_for_status()
        sip_json = sip.json()

        cert = client.post(f"{base_url}/geometry/certify", json={**K5_MINUS_F, "nonedge": [0, 1]})
        cert.raise_for_status()
        cert_json = cert.json()
        if cert_json is None:
            print("FAIL: expected a certificate for K5 minus an edge")
            return 2

        check = client.post(f"{base_url}/geometry/verify", params={"samples": samples}, json=cert_json)
        check.raise_for_status()
        check_json = check.json()

        print("base_url=", base_url)
        print("sip3=", sip_json.get("answer"))
        print("certificate=", cert_json.get("kind"), cert_json.get("claimed_values"))
        print("verify=", check_json.get("ok"), check_json.get("clusters"))

        if sip_json.get("answer") is not False:
            print("FAIL: K5 minus an edge must not have the 3-SIP")
            return 2
        if not check_json.get("ok"):
            print("FAIL: certificate rejected:", "; ".join(check_json.get("reasons") or []))
            return 2

    print("OK")
    return 0


def main(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(
        description="End-to-end smoke test: health -> sip verdict -> certificate -> sampled verification."
    )
    parser.add_argument("--base-url", default="http://127.0.0.1:8000")
    parser.add_argument("--timeout", type=float, default=120.0)
    parser.add_argument("--samples", type=int, default=1000, help="samples for /geometry/verify")
    args = parser.parse_args(argv)

    try:
        return _run(base_url=args.base_url, samples=args.samples, timeout=args.timeout)
    except httpx.HTTPError as e:
        print("HTTP ERROR:", e)
        return 1
    except Exception as e:
        print("ERROR:", e)
        return 1


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
