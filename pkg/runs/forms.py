from fractions import Fraction

from django import forms
from django.conf import settings

from star.lie import ALGEBRAS
from weights.angles import AngleMapKind
from weights.densities import OneForm
from weights.engine import COUNTED, METHODS, MONTE_CARLO, SEMICIRCLE
from weights.models import StoredWeightTable

ANGLE_CHOICES = [
    ("hyperbolic", "Hyperbolic"),
    ("euclidean", "Euclidean reflection"),
]
ANGLE_KINDS = {
    "hyperbolic": AngleMapKind.HYPERBOLIC,
    "euclidean": AngleMapKind.EUCLIDEAN,
}
CHECK_KINDS = ("assoc", "zz", "prelie", "b-relations", "wheel")


def parse_form_option(text: str):
    """
    Parse ``uniform``, ``bump:c,w``, ``semicircle[:c]`` or ``point[:base[,epsilon]]``
    into the form and its raw parameters.
    """
    kind, _, params = text.strip().partition(":")
    values = [p for p in params.split(",") if p]
    try:
        if kind == "uniform" and not values:
            return OneForm.uniform(), values
        if kind == "bump" and len(values) == 2:
            return OneForm.bump(float(values[0]), float(values[1])), values
        if kind == "semicircle" and len(values) <= 1:
            return OneForm.semicircle(*(float(v) for v in values)), values
        if kind == "point" and len(values) <= 2:
            point = [Fraction(v) for v in values]
            return OneForm.point(point[0] if point else settings.QNTZ_REGULAR_BASE), point
    except (ValueError, ZeroDivisionError) as exc:
        raise forms.ValidationError(f"Invalid form {text!r}: {exc}")
    raise forms.ValidationError(
        f"Invalid form {text!r}. Use uniform, bump:c,w, semicircle:c or point:base,epsilon."
    )


# Forms
class RunConfigForm(forms.Form):
    n = forms.IntegerField(min_value=0, required=False)
    m = forms.IntegerField(min_value=0, required=False)
    order = forms.IntegerField(min_value=0, required=False)
    method = forms.ChoiceField(choices=[(m, m) for m in METHODS], required=False)
    against = forms.ChoiceField(choices=[(m, m) for m in METHODS], required=False)
    form = forms.CharField(required=False)
    wheel_forms = forms.CharField(required=False)
    angle = forms.ChoiceField(choices=ANGLE_CHOICES, required=False)
    seed = forms.IntegerField(min_value=0, required=False)
    samples = forms.IntegerField(min_value=1, required=False)
    tol = forms.FloatField(min_value=0, required=False)
    out = forms.CharField(required=False)
    algebra = forms.ChoiceField(choices=[(a, a) for a in ALGEBRAS], required=False)
    kind = forms.ChoiceField(choices=[(k, k) for k in CHECK_KINDS], required=False)
    degree = forms.IntegerField(min_value=1, required=False)
    triples = forms.IntegerField(min_value=1, required=False)
    essential = forms.BooleanField(required=False)
    save = forms.BooleanField(required=False)
    table_id = forms.IntegerField(min_value=1, required=False)
    table = forms.CharField(required=False)

    def clean_form(self):
        text = self.cleaned_data["form"]
        if not text:
            return None
        return parse_form_option(text)

    def clean_wheel_forms(self):
        text = self.cleaned_data["wheel_forms"]
        if not text:
            return None
        wheel_forms = [parse_form_option(option)[0] for option in text.split()]
        if not all(form.smooth for form in wheel_forms):
            raise forms.ValidationError("The wheel relation needs smooth forms.")
        return wheel_forms

    def clean_angle(self):
        return ANGLE_KINDS[self.cleaned_data["angle"] or "hyperbolic"]

    def clean_table_id(self):
        table_id = self.cleaned_data["table_id"]
        if table_id is not None and not StoredWeightTable.objects.filter(pk=table_id).exists():
            raise forms.ValidationError(f"No stored weight table with id {table_id}.")
        return table_id

    def clean(self):
        cleaned_data = super().clean()
        form, params = cleaned_data.get("form") or (None, [])
        method = cleaned_data.get("method")
        if not method:
            # a bare "semicircle" names the semicircle rule
            if form is None or (form.kind == "semicircle" and not params):
                method = SEMICIRCLE
            elif form.kind == "point":
                method = COUNTED
            else:
                method = MONTE_CARLO
        if method == MONTE_CARLO:
            form = form or OneForm.uniform()
            if not form.smooth:
                raise forms.ValidationError("Monte-Carlo weights need a smooth form, not a point form.")
        elif method == COUNTED:
            if form is not None and form.kind != "point":
                raise forms.ValidationError("Counted weights take a point form.")
            if params:
                cleaned_data["base"] = params[0]
            if len(params) > 1:
                cleaned_data["epsilon"] = params[1]
            form = None
        else:
            form = None
        if cleaned_data.get("table_id") and cleaned_data.get("table"):
            raise forms.ValidationError("Give either --table-id or --table, not both.")
        cleaned_data["method"] = method
        cleaned_data["form"] = form
        if cleaned_data.get("order") is None:
            cleaned_data["order"] = settings.QNTZ_COUNTED_ORDER if method == COUNTED else settings.QNTZ_ORDER
        if cleaned_data.get("seed") is None:
            cleaned_data["seed"] = settings.QNTZ_SEED
        if cleaned_data.get("samples") is None:
            cleaned_data["samples"] = settings.QNTZ_MC_SAMPLES
        return cleaned_data

    def config(self) -> dict:
        """The cleaned options, defaults included, in JSON form."""
        config = {}
        for name, value in sorted(self.cleaned_data.items()):
            if value is None or value is False or value == "":
                continue
            if isinstance(value, OneForm):
                value = value.to_json()
            elif isinstance(value, AngleMapKind):
                value = value.value
            elif isinstance(value, Fraction):
                value = str(value)
            elif isinstance(value, list):
                value = [v.to_json() for v in value]
            config[name] = value
        return config
