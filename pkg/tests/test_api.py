import base64
import io
import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient
from PIL import Image

from promoboard.canvas import save as save_canvas
from promoboard.cli import main as cli_main
from promoboard.corpus import BlobStore
from promoboard.studio import Studio
from promoboard.server import create_app
from conftest import build_index, make_record, mask_png, png_bytes


@pytest.fixture
def client(tmp_path, toy_graph, suite):
    blobs = BlobStore(tmp_path / "blobs")
    index = build_index([
        make_record("i1", keywords=["juice"], objects=["bottle"],
                    dominant=(250, 160, 20), caption="image of juice"),
        make_record("i2", keywords=["juice", "orange"], objects=["cup"],
                    dominant=(240, 150, 10), caption="image of orange"),
        make_record("i3", keywords=["orange"], objects=["bottle"],
                    dominant=(230, 140, 5), caption="image of orange"),
    ])
    for rid in ("i1", "i2", "i3"):
        blobs.put(rid, suite.call("image_gen", index.get(rid).caption_cache))
    studio = Studio(index, toy_graph, suite, blobs=blobs, rng_seed=0)
    return TestClient(create_app(studio), raise_server_exceptions=False)


class TestCanvasEndpoints:
    def test_create_and_get(self, client):
        doc = client.post("/canvas").json()
        cid = doc["canvas"]["id"]
        assert client.get(f"/canvas/{cid}").json() == doc

    def test_get_unknown_is_404_envelope(self, client):
        r = client.get("/canvas/nope")
        assert r.status_code == 404
        assert r.json()["error"]["code"] == "not_found"

    def test_put_round_trip(self, client):
        cid = client.post("/canvas").json()["canvas"]["id"]
        client.post(f"/canvas/{cid}/blocks", json={"kind": "text", "payload": "hi"})
        doc = client.get(f"/canvas/{cid}").json()
        r = client.put(f"/canvas/{cid}", content=json.dumps(doc).encode())
        assert r.status_code == 200
        assert r.json()["canvas"]["blocks"][0]["payload"] == "hi"

    def test_put_stale_revision_conflicts(self, client):
        cid = client.post("/canvas").json()["canvas"]["id"]
        stale = client.get(f"/canvas/{cid}").json()
        client.post(f"/canvas/{cid}/blocks", json={"kind": "text", "payload": "hi"})
        r = client.put(f"/canvas/{cid}", content=json.dumps(stale).encode())
        assert r.status_code == 409
        assert r.json()["error"]["code"] == "conflict"

    def test_put_malformed_document_is_422(self, client):
        cid = client.post("/canvas").json()["canvas"]["id"]
        r = client.put(f"/canvas/{cid}", content=b"{broken")
        assert r.status_code == 422
        assert r.json()["error"]["code"] == "parse_failure"

    def test_block_create_bad_kind_is_400(self, client):
        cid = client.post("/canvas").json()["canvas"]["id"]
        r = client.post(f"/canvas/{cid}/blocks", json={"kind": "wat", "payload": "x"})
        assert r.status_code == 400
        assert r.json()["error"]["code"] == "bad_request"

    def test_generate_and_link_and_layout(self, client):
        cid = client.post("/canvas").json()["canvas"]["id"]
        client.post(f"/canvas/{cid}/blocks", json={"kind": "image", "payload": "i1"})
        blk = client.post(
            f"/canvas/{cid}/generate", json={"source": "b1", "what": "images"}
        ).json()
        assert blk["kind"] == "image_rec"
        client.post(f"/canvas/{cid}/blocks", json={"kind": "text", "payload": "orange drink"})
        r = client.post(f"/canvas/{cid}/link", json={"from": "b3", "to": blk["id"]})
        assert r.status_code == 200
        assert r.json()["edge"]["kind"] == "customization"
        assert r.json()["target"]["kind"] == "image_rec"
        laid = client.post(f"/canvas/{cid}/layout").json()
        assert laid["canvas"]["revision"] > 0

    def test_unsupported_link_is_400(self, client):
        cid = client.post("/canvas").json()["canvas"]["id"]
        client.post(f"/canvas/{cid}/blocks", json={"kind": "text", "payload": "a"})
        client.post(f"/canvas/{cid}/blocks", json={
            "kind": "search_results", "payload": {"ids": [], "oov": False}
        })
        r = client.post(f"/canvas/{cid}/link", json={"from": "b1", "to": "b2"})
        assert r.status_code == 400


class TestSearchAndRecommend:
    def test_search(self, client):
        r = client.post("/search/images", json={"topic": "juice"})
        assert r.json() == {"ids": ["i1", "i2"], "out_of_vocabulary": False}

    def test_search_empty_topic_is_400(self, client):
        assert client.post("/search/images", json={"topic": " "}).status_code == 400

    def test_recommend_images(self, client):
        body = client.post("/recommend/images", json={"seed": "i1"}).json()
        assert body["seed"] == "i1"
        assert set(body) >= {"semantic", "color", "object", "chosen_keyword"}

    def test_recommend_unknown_seed_is_404(self, client):
        assert client.post("/recommend/images", json={"seed": "zzz"}).status_code == 404

    def test_keywords(self, client):
        words = client.post("/recommend/keywords", json={"seed": "i1"}).json()["keywords"]
        assert "juice" in words

    def test_captions(self, client):
        body = client.post("/recommend/captions", json={"topic": "homemade juice"}).json()
        assert len(body["product"]) == 3


class TestExploreAndFuse:
    def test_explore_text_image(self, client):
        body = client.post(
            "/explore/text-image", json={"seed": "i1", "text_context": "orange morning"}
        ).json()
        assert body["keywords"]["contextual_prompt"] == (
            "image of juice under the context of orange morning"
        )
        assert set(body["recommendation"]) >= {"semantic", "color", "object"}

    def test_explore_image_image(self, client):
        body = client.post(
            "/explore/image-image", json={"seed": "i1", "context": "i3"}
        ).json()
        assert body["keywords"]["seed_semantic"] is not None

    def test_explore_text_caption(self, client):
        body = client.post(
            "/explore/text-caption",
            json={"seed_text": "homemade juice", "text_context": "fun"},
        ).json()
        assert len(body["activity"]) == 3

    def test_fuse_text_image_returns_new_id(self, client):
        body = client.post(
            "/fuse/text-image", json={"target": "i1", "prompt": "orange background"}
        ).json()
        assert body["id"] not in ("i1", "i2", "i3")
        img = client.get(f"/images/{body['id']}")
        assert img.headers["content-type"] == "image/png"

    def test_fuse_text_caption(self, client):
        body = client.post(
            "/fuse/text-caption", json={"caption": "Fresh *juice*", "prompt": "punchier"}
        ).json()
        assert isinstance(body["caption"], str) and body["caption"]

    def test_fuse_image_image(self, client):
        body = client.post(
            "/fuse/image-image", json={"target": "i1", "interest": "i3"}
        ).json()
        assert body["id"]

    def test_fuse_image_caption(self, client):
        body = client.post(
            "/fuse/image-caption", json={"caption": "Fresh *juice*", "interest": "i3"}
        ).json()
        assert body["caption"]

    def test_fuse_empty_prompt_is_400(self, client):
        r = client.post("/fuse/text-image", json={"target": "i1", "prompt": ""})
        assert r.status_code == 400


class TestImageEndpoints:
    def test_upload_annotates(self, client, suite):
        data = suite.call("image_gen", "image of ramen")
        r = client.post("/images/upload", json={"data": base64.b64encode(data).decode()})
        body = r.json()
        assert body["caption"] == "image of ramen"
        assert len(body["dominant"]) == 3
        assert client.get(f"/images/{body['id']}").content == data

    def test_upload_undecodable_is_400(self, client):
        r = client.post(
            "/images/upload", json={"data": base64.b64encode(b"not a png").decode()}
        )
        assert r.status_code == 400

    def test_get_unknown_image_is_404(self, client):
        r = client.get("/images/zzz")
        assert r.status_code == 404
        assert r.json()["error"]["code"] == "not_found"

    def test_regenerate(self, client):
        body = client.post("/images/i1/regenerate").json()
        assert body["id"] != "i1"

    def test_mask_edit(self, client):
        src = client.get("/images/i1").content
        size = Image.open(io.BytesIO(src)).size
        mask = mask_png(size, (0, 0, size[0] // 2, size[1] // 2))
        r = client.post("/images/i1/mask-edit", json={
            "mask": base64.b64encode(mask).decode(), "prompt": "blue sky"
        })
        assert r.status_code == 200

    def test_mask_edit_empty_mask_is_400(self, client):
        src = client.get("/images/i1").content
        size = Image.open(io.BytesIO(src)).size
        r = client.post("/images/i1/mask-edit", json={
            "mask": base64.b64encode(mask_png(size, None)).decode(), "prompt": "x"
        })
        assert r.status_code == 400

    def test_provider_failure_maps_to_502(self, tmp_path, toy_graph, suite):
        from promoboard.providers import ProviderResponseError

        class FailingChat:
            def complete(self, prompt):
                raise ProviderResponseError("chat", "upstream went away")

        suite.chat = FailingChat()
        index = build_index([make_record("i1", keywords=["juice"], caption="c")])
        studio = Studio(index, toy_graph, suite, rng_seed=0)
        client = TestClient(create_app(studio), raise_server_exceptions=False)
        r = client.post("/recommend/captions", json={"topic": "juice"})
        assert r.status_code == 502
        assert r.json()["error"] == {
            "code": "provider_failure",
            "message": r.json()["error"]["message"],
            "provider": "chat",
        }


class TestPostExport:
    def test_export_via_search(self, client):
        cid = client.post("/canvas").json()["canvas"]["id"]
        client.post(f"/canvas/{cid}/blocks", json={"kind": "image", "payload": "i1"})
        blk = client.post(
            f"/canvas/{cid}/generate", json={"source": "b1", "what": "post"}
        ).json()
        r = client.get(f"/post/{blk['id']}/export")
        assert r.headers["content-type"] == "image/png"
        assert Image.open(io.BytesIO(r.content)).size == (1080, 1350)

    def test_export_unknown_block_is_404(self, client):
        assert client.get("/post/zzz/export").status_code == 404


# --------------------------------------------------------------------------
# CLI


def write_fixture_tree(root, n_images=5, duplicate=False):
    imgdir = root / "imgs"
    imgdir.mkdir()
    rows = []
    colors = [(250, 120, 10), (10, 250, 10), (10, 10, 250), (250, 250, 10), (120, 120, 120)]
    for i in range(n_images):
        path = imgdir / f"img{i}.png"
        path.write_bytes(png_bytes(colors[i % len(colors)], (24, 24)))
        rows.append({"id": f"img{i}", "uri": str(path), "keywords": ["juice"],
                     "objects": ["bottle"]})
    if duplicate:
        rows.append(dict(rows[0]))
    manifest = root / "manifest.jsonl"
    manifest.write_text("\n".join(json.dumps(r) for r in rows))
    assoc = root / "assoc.csv"
    assoc.write_text("cue,response,strength\njuice,orange,3\njuice,health,1\n")
    lex = root / "lex.csv"
    lex.write_text("word,concreteness,imageability\njuice,0.9,0.9\norange,0.9,0.9\n")
    return manifest, assoc, lex


class TestCli:
    def test_ingest_five_images(self, tmp_path):
        manifest, assoc, lex = write_fixture_tree(tmp_path)
        out = tmp_path / "index.json"
        result = CliRunner().invoke(cli_main, [
            "ingest", "--manifest", str(manifest), "--associations", str(assoc),
            "--lexicon", str(lex), "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert "ingested 5 records" in result.output
        assert out.exists()

    def test_missing_required_flag_exits_2(self, tmp_path):
        result = CliRunner().invoke(cli_main, ["ingest", "--out", "x.json"])
        assert result.exit_code == 2

    def test_duplicate_id_exits_1_with_diagnostic(self, tmp_path):
        manifest, assoc, lex = write_fixture_tree(tmp_path, duplicate=True)
        result = CliRunner().invoke(cli_main, [
            "ingest", "--manifest", str(manifest), "--associations", str(assoc),
            "--out", str(tmp_path / "index.json"),
        ])
        assert result.exit_code == 1
        assert "duplicate image id" in result.output

    def test_resume_skips_existing(self, tmp_path):
        manifest, assoc, lex = write_fixture_tree(tmp_path)
        out = tmp_path / "index.json"
        runner = CliRunner()
        first = runner.invoke(cli_main, [
            "ingest", "--manifest", str(manifest), "--associations", str(assoc),
            "--out", str(out),
        ])
        assert first.exit_code == 0
        second = runner.invoke(cli_main, [
            "ingest", "--manifest", str(manifest), "--associations", str(assoc),
            "--out", str(out), "--resume", str(out),
        ])
        assert second.exit_code == 0
        assert "ingested 5 records" in second.output

    def test_bench_runs(self):
        result = CliRunner().invoke(cli_main, ["bench", "--pixels", "5000", "--trials", "1"])
        assert result.exit_code == 0, result.output
        assert "hist" in result.output
