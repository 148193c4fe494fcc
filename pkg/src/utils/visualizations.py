import pandas as pd
import plotly.express as px
import plotly.graph_objects as go


def plot_flex_path(flex_df):
    """Plot vertex trajectories of a traced flex in 3D"""
    fig = px.line_3d(
        flex_df,
        x='x',
        y='y',
        z='z',
        color=flex_df['vertex'].astype(str),
        title='Vertex Trajectories Along the Flex'
    )
    fig.update_layout(
        legend_title='Vertex',
        template='plotly_white'
    )
    return fig


def plot_framework(framework_df, edges):
    """Plot framework points and bars; framework_df has one row per vertex with x, y, z"""
    fig = go.Figure()
    for u, v in edges:
        fig.add_trace(go.Scatter3d(
            x=[framework_df.loc[u, 'x'], framework_df.loc[v, 'x']],
            y=[framework_df.loc[u, 'y'], framework_df.loc[v, 'y']],
            z=[framework_df.loc[u, 'z'], framework_df.loc[v, 'z']],
            mode='lines',
            line=dict(color='grey', width=4),
            showlegend=False
        ))
    fig.add_trace(go.Scatter3d(
        x=framework_df['x'],
        y=framework_df['y'],
        z=framework_df['z'],
        mode='markers+text',
        text=[str(k) for k in framework_df.index],
        marker=dict(size=5),
        name='Vertices'
    ))
    fig.update_layout(title='Framework', template='plotly_white')
    return fig


def plot_verification_summary(results_df):
    """Agreements vs disagreements per theorem and vertex count"""
    summary = (
        results_df
        .assign(outcome=results_df['agrees'].map({True: 'agree', False: 'disagree'}))
        .groupby(['theorem', 'n', 'outcome'])
        .size()
        .reset_index(name='graphs')
    )
    fig = px.bar(
        summary,
        x='n',
        y='graphs',
        color='outcome',
        facet_col='theorem',
        barmode='stack',
        title='Combinatorial vs Numerical Verdicts'
    )
    fig.update_layout(
        xaxis_title='Vertices',
        yaxis_title='Graphs',
        legend_title='Outcome',
        template='plotly_white'
    )
    return fig


def flex_path_frame_at(flex_df, step):
    """One sample of a flex path as a vertex-indexed frame, for plot_framework"""
    frame = flex_df[flex_df['step'] == step].set_index('vertex')[['x', 'y', 'z']]
    return pd.DataFrame(frame)
