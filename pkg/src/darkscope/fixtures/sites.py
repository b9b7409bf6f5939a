"""Bundled fixture shop sites.

Three corpora back the test and acceptance suites:

- `build_deception_pages`: six dynamic pages whose per-visit behavior is
  scripted (resetting timer, persisting offer, honest timer, reload-random
  stock, period-3 stock, constant stock). Visit 2 of every path is consumed
  by the monitor's immediate reload check, so the scripted visit lists
  repeat their first value at index 1.
- `build_five_site_corpus`: five small shops with designed dark-pattern
  placements plus three reject sites (non-shopping, German, unreachable);
  FIVE_SITE_MANIFEST freezes the expected per-type label counts.
- `build_outcome_corpus`: twenty single-product shops with designed checkout
  outcomes (14 reach checkout, 3 stall after add-to-cart, 3 fail).
"""

from __future__ import annotations

DECEPTION_HOST = "monitor.fixture.test"

_TIMER_PAGE = """<html><body style="width:1000px">
<header><div>Monitor Fixture Shop</div></header>
<main>
<div id="product">Aluminum Water Bottle</div>
<div id="price">$18.00</div>
{offer}
</main>
</body></html>"""


def _mmss(seconds: int) -> str:
    return f"{seconds // 60:02d}:{seconds % 60:02d}"


def _timer_offer(remaining: int, copy: str) -> str:
    return f'<div id="offer" style="background-color:#fff0f0">{copy} {_mmss(remaining)}</div>'


def _stock_page(quantity: int | None, message: str | None = None) -> str:
    if quantity is not None:
        stock = f'<div id="stock">Only {quantity} left in stock!</div>'
    elif message:
        stock = f'<div id="stock">{message}</div>'
    else:
        stock = ""
    return f"""<html><body style="width:1000px">
<main>
<div id="product">Canvas Weekend Bag</div>
<div id="price">$42.00</div>
{stock}
</main>
</body></html>"""


def build_deception_pages() -> dict[str, object]:
    """Path -> per-visit content for DECEPTION_HOST."""
    reset_schedule = [600, 600] + [300 if i % 2 else 600 for i in range(2, 16)]
    persist_schedule = [2, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]
    honest_schedule = [2, 2, 1, 0]  # later visits drop the offer entirely
    random_stock = [14, 9, 17, 6, 11, 3, 8, 2, 13, 5, 12, 4]
    schedule_stock = [10, 10, 8, 6, 10, 8, 6, 10, 8, 6, 10, 8]

    def reset_timer(visit: int) -> str:
        remaining = reset_schedule[min(visit - 1, len(reset_schedule) - 1)]
        return _TIMER_PAGE.format(offer=_timer_offer(remaining, "Flash sale ends in"))

    def persist_offer(visit: int) -> str:
        remaining = persist_schedule[min(visit - 1, len(persist_schedule) - 1)]
        return _TIMER_PAGE.format(
            offer=_timer_offer(remaining, "Save 40% on bottles, offer expires in")
        )

    def honest_timer(visit: int) -> str:
        if visit - 1 >= len(honest_schedule):
            return _TIMER_PAGE.format(offer="")
        remaining = honest_schedule[visit - 1]
        return _TIMER_PAGE.format(offer=_timer_offer(remaining, "Spring sale ends in"))

    def random_stock_page(visit: int) -> str:
        return _stock_page(random_stock[min(visit - 1, len(random_stock) - 1)])

    def schedule_stock_page(visit: int) -> str:
        return _stock_page(schedule_stock[min(visit - 1, len(schedule_stock) - 1)])

    def constant_stock_page(visit: int) -> str:
        return _stock_page(7)

    return {
        "/reset-timer.html": reset_timer,
        "/persist-offer.html": persist_offer,
        "/honest-timer.html": honest_timer,
        "/random-stock.html": random_stock_page,
        "/schedule-stock.html": schedule_stock_page,
        "/constant-stock.html": constant_stock_page,
    }


# -- five-site corpus ----------------------------------------------------------

SHOP_HOSTS = (
    "alpha.shop-fixture.test",
    "beta.shop-fixture.test",
    "gamma.shop-fixture.test",
    "delta.shop-fixture.test",
    "epsilon.shop-fixture.test",
)
GERMAN_HOST = "eta.shop-fixture.test"
NEWS_HOST = "zeta.news-fixture.test"
DEAD_HOST = "theta.shop-fixture.test"
FOMO_HOST = "notif.fomo.com"
BEEKETING_HOST = "cdn.beeketing.com"

# Designed label counts for the five-site corpus (what an analyst pass over
# the crawl output should yield).
FIVE_SITE_MANIFEST = {
    "per_type_instances": {
        "Countdown Timer": 1,
        "Low-stock Message": 2,
        "Activity Message": 2,
        "Confirmshaming": 1,
        "High-demand Message": 1,
    },
    "per_type_sites": {
        "Countdown Timer": 1,
        "Low-stock Message": 2,
        "Activity Message": 2,
        "Confirmshaming": 1,
        "High-demand Message": 1,
    },
    "total_instances": 7,
    "sites_with_patterns": 4,
    "corpus_size": 5,
    "overall_site_fraction": 0.8,
    # Pattern text anchors: (type, site host, regex over segment text, deceptive)
    "labels": [
        ("Countdown Timer", "alpha.shop-fixture.test", r"sale ends in \d\d:\d\d", True),
        ("Low-stock Message", "beta.shop-fixture.test", r"only \d+ left in stock", True),
        ("Activity Message", "beta.shop-fixture.test", r"jane from washington", False),
        ("Low-stock Message", "gamma.shop-fixture.test", r"only 5 left in stock", False),
        ("Confirmshaming", "gamma.shop-fixture.test", r"no thanks, i hate saving money", False),
        ("Activity Message", "delta.shop-fixture.test", r"emma from texas", False),
        ("High-demand Message", "delta.shop-fixture.test", r"selling fast", False),
    ],
}


def _shop_page(host: str, title: str, body: str, width: int = 1200) -> str:
    return f"""<html><body style="width:{width}px">
<header><div id="site-title">{title}</div></header>
<main>
{body}
</main>
<footer><div>Free shipping on orders over $50</div></footer>
</body></html>"""


def _home(host: str, title: str, product_paths: list[str], extra: str = "") -> str:
    links = "\n".join(
        f'<div><a href="{p}">{p.rsplit("/", 1)[-1].replace(".html", "").replace("-", " ")}</a></div>'
        for p in product_paths
    )
    return _shop_page(
        host,
        title,
        f"""{extra}
<div id="welcome">Welcome to {title}. Shop our latest arrivals and find the
perfect piece for your home, with easy returns on every order.</div>
<div id="nav-links">
{links}
<div><a href="/about.html">about us</a></div>
</div>""",
    )


def _product(host: str, title: str, name: str, price: str, extras: str = "",
             options: str = "", add_attrs: str = "") -> str:
    return _shop_page(
        host,
        title,
        f"""<div id="product-name">{name}</div>
<div id="price">{price}</div>
{extras}
{options}
<div><button id="add-btn" {add_attrs}
  style="width:220px;height:48px;background-color:rgb(220,40,40);color:white">Add to Cart</button></div>
<div><a href="/cart.html" id="cart-link">View Cart</a></div>""",
    )


def _cart(host: str, title: str, item: str, extras: str = "", checkout_attrs: str = "") -> str:
    return _shop_page(
        host,
        title,
        f"""<div id="cart-title">Your shopping cart</div>
<div id="cart-item">{item}</div>
{extras}
<div><button id="checkout-btn" data-nav="/checkout.html" {checkout_attrs}
  style="width:220px;height:44px;background-color:rgb(40,160,60);color:white">Proceed to Checkout</button></div>""",
    )


def _checkout(host: str, title: str) -> str:
    return _shop_page(
        host,
        title,
        """<div id="checkout-title">Checkout</div>
<div>Shipping address</div>
<form>
<div><input name="name" type="text"></div>
<div><input name="street" type="text"></div>
</form>
<div id="payment-note">Payment details are entered on the next step.</div>""",
    )


def build_five_site_corpus() -> dict[str, dict[str, object]]:
    """Host -> pages for the bundled end-to-end corpus (plus reject sites
    and third-party notification hosts)."""
    sites: dict[str, dict[str, object]] = {}

    # alpha: resetting countdown timer on its first product page
    alpha = "alpha.shop-fixture.test"
    alpha_timer_schedule = [600, 300]

    def alpha_lamp(visit: int) -> str:
        remaining = alpha_timer_schedule[(visit - 1) % 2]
        timer = (
            f'<div id="timer" style="background-color:#fff0f0">'
            f"Hurry! Sale ends in {_mmss(remaining)} - save 50% on lamps</div>"
        )
        options = """<div><select name="finish" required>
<option value="walnut">Walnut</option>
<option value="oak">Oak</option>
</select></div>"""
        return _product(alpha, "Alpha Home Goods", "Vintage Walnut Lamp", "$49.99",
                        extras=timer, options=options)

    sites[alpha] = {
        "/": _home(alpha, "Alpha Home Goods",
                   ["/product/walnut-lamp.html", "/product/brass-clock.html"]),
        "/product/walnut-lamp.html": alpha_lamp,
        "/product/brass-clock.html": _product(alpha, "Alpha Home Goods",
                                              "Brass Mantel Clock", "$89.00"),
        "/about.html": _shop_page(alpha, "Alpha Home Goods",
                                  "<div>We are a family-run store for home goods.</div>"),
        "/cart.html": _cart(alpha, "Alpha Home Goods", "Vintage Walnut Lamp"),
        "/checkout.html": _checkout(alpha, "Alpha Home Goods"),
    }

    # beta: reload-random low stock plus a third-party activity notification
    beta = "beta.shop-fixture.test"
    beta_stock = [14, 9, 17, 6, 11, 3, 8, 2, 13, 5, 12, 4, 16, 7]

    def beta_scarf(visit: int) -> str:
        quantity = beta_stock[(visit - 1) % len(beta_stock)]
        extras = f"""<div id="stock" style="color:crimson">Only {quantity} left in stock!</div>
<div id="activity">Jane from Washington, DC just purchased this product</div>
<script src="http://{FOMO_HOST}/activity.js"></script>"""
        return _product(beta, "Beta Knitwear", "Merino Wool Scarf", "$34.00", extras=extras)

    sites[beta] = {
        "/": _home(beta, "Beta Knitwear", ["/product/wool-scarf.html"]),
        "/product/wool-scarf.html": beta_scarf,
        "/about.html": _shop_page(beta, "Beta Knitwear", "<div>Knitwear made to last.</div>"),
        "/cart.html": _cart(beta, "Beta Knitwear", "Merino Wool Scarf"),
        "/checkout.html": _checkout(beta, "Beta Knitwear"),
    }

    # gamma: confirmshaming popup and a constant low-stock message
    gamma = "gamma.shop-fixture.test"
    gamma_popup = """<div id="promo-popup" style="background-color:#f5f5ff">
<div>Join our list for 10% off your first order)</div>
<button data-dismiss="#promo-popup" style="width:260px;height:30px">No thanks, I hate saving money</button>
</div>"""
    sites[gamma] = {
        "/": _home(gamma, "Gamma Outdoor", ["/product/trail-boots.html"]),
        "/product/trail-boots.html": _product(
            gamma, "Gamma Outdoor", "Trail Boots", "$120.00",
            extras=gamma_popup + '\n<div id="stock">Only 5 left in stock</div>',
        ),
        "/about.html": _shop_page(gamma, "Gamma Outdoor", "<div>Gear for every trail.</div>"),
        "/cart.html": _cart(gamma, "Gamma Outdoor", "Trail Boots"),
        "/checkout.html": _checkout(gamma, "Gamma Outdoor"),
    }

    # delta: high-demand message in the cart plus a second activity provider
    delta = "delta.shop-fixture.test"
    delta_extras = f"""<div id="activity">Emma from Texas just bought a ceramic planter</div>
<script src="http://{BEEKETING_HOST}/notify.js"></script>"""
    sites[delta] = {
        "/": _home(delta, "Delta Garden", ["/product/ceramic-planter.html"]),
        "/product/ceramic-planter.html": _product(
            delta, "Delta Garden", "Ceramic Planter", "$22.00", extras=delta_extras
        ),
        "/about.html": _shop_page(delta, "Delta Garden", "<div>Planters and pots.</div>"),
        "/cart.html": _cart(
            delta, "Delta Garden", "Ceramic Planter",
            extras='<div id="demand">Selling fast! These items are in high demand</div>',
        ),
        "/checkout.html": _checkout(delta, "Delta Garden"),
    }

    # epsilon: a clean shop, no dark patterns
    epsilon = "epsilon.shop-fixture.test"
    sites[epsilon] = {
        "/": _home(epsilon, "Epsilon Paper Co", ["/product/linen-notebook.html"]),
        "/product/linen-notebook.html": _product(
            epsilon, "Epsilon Paper Co", "Linen Notebook", "$14.00"
        ),
        "/about.html": _shop_page(epsilon, "Epsilon Paper Co", "<div>Fine paper goods.</div>"),
        "/cart.html": _cart(epsilon, "Epsilon Paper Co", "Linen Notebook"),
        "/checkout.html": _checkout(epsilon, "Epsilon Paper Co"),
    }

    # rejects: a news site and a German-language shop (plus DEAD_HOST, which
    # is intentionally absent from the server so fetches fail)
    sites[NEWS_HOST] = {
        "/": "<html><body><div>Daily headlines and local reporting from our newsroom,"
             " covering city hall, schools, and weather every morning.</div></body></html>",
    }
    sites[GERMAN_HOST] = {
        "/": "<html><body><div>Willkommen in unserem Geschäft. Legen Sie Artikel in den"
             " Warenkorb und profitieren Sie von kostenlosem Versand und schnellen"
             " Rücksendungen bei jeder Bestellung.</div></body></html>",
    }

    # third-party notification providers
    sites[FOMO_HOST] = {
        "/activity.js": 'window.__notifications=[{"name":"Jane","location":"Washington, DC",'
                        '"action":"purchased this product"}];',
    }
    sites[BEEKETING_HOST] = {
        "/notify.js": 'var feed=[{"name":"Emma","location":"Texas","item":"ceramic planter"}];',
    }
    return sites


def five_site_ranked_list() -> str:
    hosts = [
        "alpha.shop-fixture.test",
        NEWS_HOST,
        "beta.shop-fixture.test",
        "gamma.shop-fixture.test",
        GERMAN_HOST,
        "delta.shop-fixture.test",
        DEAD_HOST,
        "epsilon.shop-fixture.test",
    ]
    return "\n".join(f"{i},{h}" for i, h in enumerate(hosts, start=1)) + "\n"


def five_site_categories() -> dict[str, str]:
    mapping = {h: "shopping" for h in SHOP_HOSTS}
    mapping[GERMAN_HOST] = "shopping"
    mapping[DEAD_HOST] = "shopping"
    mapping[NEWS_HOST] = "not-shopping"
    return mapping


# -- outcome corpus -------------------------------------------------------------

def build_outcome_corpus() -> tuple[dict[str, dict[str, object]], dict[str, str]]:
    """Twenty shops with designed checkout outcomes.

    Returns (host -> pages, product URL -> expected outcome).
    14 reach checkout, 3 add to cart only (broken view-cart), 3 fail
    (1 dead host, 2 without any add-to-cart button).
    """
    sites: dict[str, dict[str, object]] = {}
    expected: dict[str, str] = {}

    def make_site(idx: int, kind: str) -> None:
        host = f"outcome-{idx:02d}.fixture.test"
        product_url = f"http://{host}/product/item-{idx}.html"
        title = f"Outcome Shop {idx}"
        if kind == "dead":
            expected[product_url] = "failed"
            return  # host intentionally not served
        if kind == "no_button":
            page = _shop_page(host, title,
                              f"<div>Item {idx}</div><div>Currently unavailable</div>")
            sites[host] = {f"/product/item-{idx}.html": page}
            expected[product_url] = "failed"
            return
        cart_attrs = 'data-broken="1"' if kind == "added_only" else ""
        sites[host] = {
            f"/product/item-{idx}.html": _product(
                host, title, f"Sample Item {idx}", f"${10 + idx}.00"
            ).replace('<a href="/cart.html" id="cart-link">View Cart</a>',
                      f'<a href="/cart.html" id="cart-link" {cart_attrs}>View Cart</a>'),
            "/cart.html": _cart(host, title, f"Sample Item {idx}"),
            "/checkout.html": _checkout(host, title),
        }
        expected[product_url] = "added_to_cart_only" if kind == "added_only" else "reached_checkout"

    kinds = ["reached"] * 14 + ["added_only"] * 3 + ["no_button", "no_button", "dead"]
    for i, kind in enumerate(kinds, start=1):
        make_site(i, kind)
    return sites, expected


def apply_manifest_labels(store_root) -> list[str]:
    """Replay the analyst pass over a crawled five-site store: find each
    designed pattern's segment by its text anchor and register the label."""
    import re

    from darkscope.store import SnapshotStore
    from darkscope.taxonomy.instances import InstanceStore, PatternInstance
    from darkscope.taxonomy.registry import load_taxonomy

    store = SnapshotStore(store_root)
    seg_rows = list(store.read_index("segments"))
    snapshots = {row["snapshot_id"]: row for row in store.read_index("snapshots")}
    seg_ids = {row["seg_id"] for row in seg_rows}

    def resolver(ref: str) -> bool:
        return ref in seg_ids or store.has_blob(ref)

    instances = InstanceStore(store.root / "labels.ndjson", load_taxonomy(), resolver=resolver)
    registered = []
    for pattern_type, site, anchor, deceptive in FIVE_SITE_MANIFEST["labels"]:
        rx = re.compile(anchor, re.IGNORECASE)
        row = next((r for r in seg_rows
                    if r["site"] == site and rx.search(r["inner_text"])), None)
        if row is None:
            raise LookupError(f"no crawled segment matches {anchor!r} on {site}")
        snap = snapshots.get(row["snapshot_id"], {})
        shots = [snap["screenshot_ref"]] if snap.get("screenshot_ref") else []
        registered.append(instances.register(PatternInstance(
            site=site, pattern_type=pattern_type, segment_refs=[row["seg_id"]],
            screenshot_refs=shots, deceptive=deceptive, labeler="analyst-fixture",
        )))
    return registered
